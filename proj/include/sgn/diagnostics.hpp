#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgn/dynamics.hpp"

namespace sgn
{

struct Verdict
{
    bool pass = false;
    double measured = 0.0;
    double limit = 0.0;
    std::string note;
};

enum class CheckStatus
{
    pass,
    fail,
    skipped
};

std::string to_string(CheckStatus s);

struct EnergyTolerances
{
    double conservation_rel = 1e-6;  // epsilon == 0: |E(T) - E(0)| / E(0)
    double monotone_slack_rel = 1e-8;
    double budget_rel = 1e-2;        // of |E(T) - E(0)|
    double budget_floor_rel = 1e-8;  // of E(0)
};

struct EnergyPoint
{
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
};

struct EnergyReport
{
    std::vector<EnergyPoint> series;
    double dissipation_integral = 0.0;
    double budget_residual = 0.0;
    double max_step_increase = 0.0;  // largest E_{k+1} - E_k
    double max_abs_drift = 0.0;      // largest |E(t) - E(0)|
    std::map<std::string, Verdict> verdicts;

    bool pass() const;
};

EnergyReport energy_budget(const SimHistory& hist, const EnergyTolerances& tol = {});

struct BoundsReport
{
    CheckStatus status = CheckStatus::skipped;
    std::string reason;
    Bounds bounds;
    double min_h = 0.0;
    double max_h = 0.0;
    double max_abs_u = 0.0;
    /// Distance to each bound, positive when inside.
    double margin_h_min = 0.0;
    double margin_h_max = 0.0;
    double margin_u = 0.0;
};

/// Depth and velocity bounds over every recorded step. Skipped (not passed)
/// when E0 is at or above the threshold.
BoundsReport bounds_check(const SimHistory& hist, double tol = 1e-4);

struct OleinikPoint
{
    double t = 0.0;
    double sup_P = 0.0;
    double sup_Q = 0.0;
    double min_h = 0.0;
};

/// Bounds max(sup P, sup Q) / min h by C (1 + 1/t), the P,Q form of the
/// one-sided gradient inequality.
struct OleinikReport
{
    std::vector<OleinikPoint> series;
    double fitted_C = 0.0;
    std::optional<double> C;
    int violations = 0;
    std::string form = "max(sup P, sup Q) / min h <= C (1 + 1/t)";

    bool clean() const { return std::isfinite(fitted_C) && violations == 0; }
};

OleinikReport oleinik_report(const SimHistory& hist, std::optional<double> C = std::nullopt);

struct BlowupPoint
{
    double t = 0.0;
    double min_ux = 0.0;
    double max_abs_hx = 0.0;
    double min_h = 0.0;
};

struct BlowupReport
{
    std::vector<BlowupPoint> series;
    std::optional<BlowupTrigger> triggered;
};

BlowupReport blowup_report(const SimHistory& hist);

struct Box
{
    double t1 = 0.0;
    double t2 = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct BoxNorm
{
    double value = 0.0;
    int time_samples = 0;
    std::string warning;
};

/// Space-time integral over the box of |h_t|^{2+a} + |h_x|^{2+a} +
/// |u_t|^{2+a} + |u_x|^{2+a}. Time derivatives come from three-point
/// differences of the snapshots; trapezoid in time over the snapshots
/// inside [t1, t2], midpoint in space over cells inside [a, b].
BoxNorm lp_box_norm(const SimHistory& hist, double alpha, const Box& box);

double dispersion_omega(double k, const Params& p);
double bond_number(const Params& p);

struct PhaseSpeed
{
    std::optional<double> speed;
    std::string status;  // "ok", "undefined", or a warning
};

/// Phase speed of wavenumber k from the drift of the k-th Fourier
/// coefficient of h - hbar across the snapshots (periodic runs). The
/// phase is unwrapped snapshot to snapshot, so snapshots must be closer
/// than half a period.
PhaseSpeed measure_phase_speed(const SimHistory& hist, double k);

} // namespace sgn
