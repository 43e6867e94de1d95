#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgn/diagnostics.hpp"
#include "sgn/dynamics.hpp"

namespace sgn
{

enum class ScenarioKind
{
    flat,
    gaussian,
    sine,
    steep,
    custom
};

std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

enum class Toggle
{
    off,
    on,
    automatic
};

struct CheckConfig
{
    bool energy = true;
    EnergyTolerances energy_tol;
    /// automatic: run only when E0 is below the threshold.
    Toggle bounds = Toggle::automatic;
    double bounds_tol = 1e-4;
    bool oleinik = false;
    std::optional<double> oleinik_C;
    bool phase_speed = false;
    double phase_tol = 0.01;

    // sweep comparisons
    std::optional<Box> box;
    double lp_alpha = 0.5;
    double lp_ratio_max = 3.0;
    double oleinik_ratio_max = 3.0;
};

struct ScenarioConfig
{
    std::string name = "run";
    ScenarioKind kind = ScenarioKind::flat;
    double amplitude = 0.0;
    double width = 1.0;
    double center = 0.0;
    /// sine: one run per entry.
    std::vector<double> wavenumbers{1.0};
    /// steep: half length of the raised plateau between the two ramps.
    double half_length = 1.0;
    /// steep: +1 raises the plateau, -1 lowers it.
    double sign = 1.0;
    /// custom: CSV with h and u columns, one row per cell.
    std::string file;
    double mollifier_epsilon = 0.0;
    /// If set, the amplitude is rescaled until the measured E0 matches.
    std::optional<double> target_energy;
    bool expect_blowup = false;
    /// Sweep runs normally mollify with width epsilon; this fixes the width.
    std::optional<double> sweep_mollifier;

    Params params;
    Grid grid = Grid::make(256, -20.0, 20.0, Mode::periodic);
    StepControl step;
    MonitorConfig monitors;
    CheckConfig checks;

    /// Throws config error on contradictions (mode mismatches and the like).
    void validate() const;
};

/// Initial state for the configured scenario, using wavenumbers[0] for sine
/// data. Applies the mollifier and energy targeting.
FlowState build_initial(const ScenarioConfig& cfg);

/// Unnormalized scenario shape without mollifier or energy targeting.
FlowState build_shape(const ScenarioConfig& cfg, double amplitude);

/// Discrete convolution of (h - hbar) and u with a normalized Gaussian of
/// standard deviation sigma. Periodic wraps; line mode treats the exterior
/// as the rest state.
FlowState mollify(const FlowState& s, const Params& p, const Grid& g, double sigma);

struct InitialInfo
{
    double E0 = 0.0;
    double E_max = 0.0;
    bool bounds_apply = false;
};

InitialInfo initial_info(const FlowState& s, const ScenarioConfig& cfg);

/// One configuration per sine wavenumber (other kinds pass through).
std::vector<ScenarioConfig> expand_wavenumbers(const ScenarioConfig& cfg);

struct CheckLine
{
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
};

struct RunArtifact
{
    ScenarioConfig cfg;
    InitialInfo initial;
    SimHistory history;
    EnergyReport energy;
    BoundsReport bounds;
    OleinikReport oleinik;
    BlowupReport blowup;
    std::optional<PhaseSpeed> phase_speed;
    std::vector<CheckLine> checks;
    double wall_seconds = 0.0;

    bool pass() const;
};

RunArtifact run_scenario(const ScenarioConfig& cfg);

struct SweepPair
{
    double eps_a = 0.0;
    double eps_b = 0.0;
    std::optional<double> l2_h;
    std::optional<double> l2_u;
};

struct SweepResult
{
    std::vector<RunArtifact> runs;
    std::vector<SweepPair> table;
    std::vector<std::optional<double>> lp_norms;
    double common_C = 0.0;
    double oleinik_ratio = 0.0;
    double lp_ratio = 0.0;
    std::vector<CheckLine> checks;

    bool pass() const;
};

/// L2 norm over the box of the difference between two runs on the same
/// grid. Both histories are sampled at 33 common times with four-point
/// Lagrange interpolation between snapshots.
std::optional<double> box_difference(const SimHistory& a, const SimHistory& b, const Box& box,
                                     bool depth);

/// Runs every epsilon (strictly decreasing, all positive) in parallel with
/// matched mollification and compares successive runs on cfg.checks.box.
SweepResult epsilon_sweep(const ScenarioConfig& cfg, const std::vector<double>& epsilons);

} // namespace sgn
