#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgn/grid.hpp"
#include "sgn/kinematics.hpp"

namespace sgn
{

/// Intermediates captured during a right-hand-side evaluation.
struct RhsHooks
{
    Field P;
    Field Q;
    Field script_r;
    Field A;
    Field A_x;
    Field B;
    bool cutoff_active = false;
};

struct RhsEval
{
    Field dh_dt;
    Field du_dt;
    /// Rate of energy production (1/48) int (P chi(P) + Q chi(Q)) dx; <= 0.
    double dissipation_rate = 0.0;
    std::optional<RhsHooks> hooks;
};

struct StepControl
{
    double cfl = 0.5;
    double dt_max = 1e-2;
    double t_end = 1.0;
    int output_every = 10;
    long max_steps = 10'000'000;

    void validate() const;
};

struct BlowupThresholds
{
    double ux = 1e3;
    double hx = 1e3;
    /// Fires the depth branch when min h < h_fraction * h_min.
    double h_fraction = 0.1;
};

struct BlowupTrigger
{
    double t = 0.0;
    std::string code;  // "gradient-pair" or "depth-pair"
    double max_abs_ux = 0.0;
    double max_abs_hx = 0.0;
    double min_h = 0.0;
};

/// Conjunctive criterion: |u_x| above threshold AND (|h_x| above threshold
/// OR h below h_fraction * h_min_ref). Never fires on u_x alone.
std::optional<BlowupTrigger> blowup_monitor(const FlowState& s, const Params& p, const Grid& g,
                                            const BlowupThresholds& thr, double h_min_ref);

/// Throws boundary error if the outermost four cells on either side leave
/// the rest state by more than tol * hbar. No-op in periodic mode.
void check_far_field(const FlowState& s, const Params& p, const Grid& g, double tol);

RhsEval rhs(const FlowState& s, const Params& p, const Grid& g, bool capture = false,
            double far_field_tol = 1e-6);

double cfl_dt(const FlowState& s, const Params& p, const Grid& g, const StepControl& c);

struct StepResult
{
    FlowState state;
    double dt = 0.0;             // step actually taken
    double dissipation = 0.0;    // RK4-weighted energy production over the step
    bool halved = false;
};

/// Classical RK4; on loss of positivity retries once at dt/2, then throws
/// depth-collapse error.
StepResult rk4_step(const FlowState& s, double dt, const Params& p, const Grid& g,
                    double far_field_tol = 1e-6);

struct SeriesRow
{
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double min_h = 0.0;
    double min_ux = 0.0;
    double max_abs_hx = 0.0;
    double sup_P = 0.0;
    double sup_Q = 0.0;
    double max_h = 0.0;
    double max_abs_u = 0.0;
    double max_abs_ux = 0.0;
    double inf_P = 0.0;
    double inf_Q = 0.0;
    /// Cumulative energy production since t = 0.
    double dissipation = 0.0;
    /// Production rate at this instant (kept signed).
    double dissipation_rate = 0.0;
    double max_abs_script_r = 0.0;
    double max_abs_B = 0.0;
};

enum class AbortReason
{
    none,
    blowup,
    depth_collapse,
    boundary_contamination,
    non_finite,
    solver_failure,
    step_limit,
};

std::string to_string(AbortReason r);

struct AbortRecord
{
    AbortReason reason = AbortReason::none;
    double t = 0.0;
    std::string detail;
    std::optional<BlowupTrigger> trigger;
};

struct MonitorConfig
{
    bool blowup = true;
    BlowupThresholds thresholds;
    double far_field_tol = 1e-6;
};

struct SimHistory
{
    Grid grid;
    Params params;
    std::vector<FlowState> snapshots;
    std::vector<SeriesRow> series;
    AbortRecord abort;
    double E0 = 0.0;
    long steps = 0;

    bool aborted() const { return abort.reason != AbortReason::none; }
    double t_final() const { return series.empty() ? 0.0 : series.back().t; }
};

SeriesRow measure(const FlowState& s, const Params& p, const Grid& g);

SimHistory simulate(const FlowState& s0, const Params& p, const Grid& g, const StepControl& c,
                    const MonitorConfig& monitors = {});

} // namespace sgn
