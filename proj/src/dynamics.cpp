#include "sgn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sgn/elliptic.hpp"
#include "sgn/error.hpp"
#include "sgn/regularization.hpp"

namespace sgn
{

std::string to_string(AbortReason r)
{
    switch (r)
    {
    case AbortReason::none: return "none";
    case AbortReason::blowup: return "blowup";
    case AbortReason::depth_collapse: return "depth-collapse";
    case AbortReason::boundary_contamination: return "boundary-contamination";
    case AbortReason::non_finite: return "non-finite";
    case AbortReason::solver_failure: return "solver-failure";
    case AbortReason::step_limit: return "step-limit";
    }
    return "unknown";
}

void StepControl::validate() const
{
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw Error(ErrorKind::config, "cfl must lie in (0, 1]");
    if (!(dt_max > 0.0))
        throw Error(ErrorKind::config, "dt_max must be positive");
    if (!(t_end >= 0.0))
        throw Error(ErrorKind::config, "t_end must be nonnegative");
    if (output_every < 1)
        throw Error(ErrorKind::config, "output_every must be at least 1");
}

void check_far_field(const FlowState& s, const Params& p, const Grid& g, double tol)
{
    if (g.mode != Mode::line)
        return;
    const double limit = tol * p.hbar;
    const int width = std::min(4, g.n / 2);
    for (int k = 0; k < width; ++k)
    {
        for (int i : {k, g.n - 1 - k})
        {
            const double dh = std::abs(s.h[i] - p.hbar);
            const double du = std::abs(s.u[i]);
            if (!(dh <= limit && du <= limit))
            {
                std::ostringstream msg;
                msg << "cell " << i << " at t = " << s.t << " has |h - hbar| = " << dh
                    << ", |u| = " << du << " (limit " << limit << ")";
                throw Error(ErrorKind::boundary, msg.str());
            }
        }
    }
}

RhsEval rhs(const FlowState& s, const Params& p, const Grid& g, bool capture,
            double far_field_tol)
{
    require_valid(s, g);
    check_far_field(s, p, g, far_field_tol);

    const std::size_t n = s.h.size();
    const Field ux = derivative(s.u, g);
    const Field hx = derivative(s.h, g);

    Field hu(n);
    Field psi(n);
    const double base = 0.5 * p.g * p.hbar * p.hbar;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double h = s.h[i];
        hu[i] = h * s.u[i];
        psi[i] = (2.0 / 3.0) * h * h * h * ux[i] * ux[i] - 1.5 * p.gamma * hx[i] * hx[i]
                 + 0.5 * p.g * h * h - base - 3.0 * p.gamma * std::log(h / p.hbar);
    }

    const TridiagonalSystem L = assemble_L(s.h, g);
    const Field nonlocal = solve_L_refined(L, s.h, derivative(psi, g), g);
    const Field mass_flux = derivative(hu, g);

    RhsEval out;
    out.dh_dt.resize(n);
    out.du_dt.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double h = s.h[i];
        out.dh_dt[i] = -mass_flux[i];
        out.du_dt[i] = -s.u[i] * ux[i] - 3.0 * p.gamma * hx[i] / (h * h) - nonlocal[i];
    }

    Field P;
    Field Q;
    const bool need_pq = capture || p.epsilon > 0.0;
    if (need_pq)
    {
        P.resize(n);
        Q.resize(n);
        const double c = p.st_speed();
        for (std::size_t i = 0; i < n; ++i)
        {
            const double a = s.h[i] * ux[i];
            const double b = c * hx[i] / std::sqrt(s.h[i]);
            P[i] = a - b;
            Q[i] = a + b;
        }
    }

    RegFields reg;
    bool active = false;
    if (p.epsilon > 0.0 && cutoff_active(P, Q, p.epsilon))
    {
        active = true;
        reg = compute_reg(s, P, Q, p, g, false);
        for (std::size_t i = 0; i < n; ++i)
        {
            out.dh_dt[i] += reg.A_x[i];
            out.du_dt[i] += reg.B[i];
        }
        out.dissipation_rate = integrate(dissipation_density(P, Q, p.epsilon), g);
    }

    if (capture)
    {
        RhsHooks hk;
        hk.cutoff_active = active;
        const Field w = derivative(nonlocal, g);
        hk.script_r.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const double h = s.h[i];
            const double c = (2.0 / 3.0) * h * h * h * ux[i] * ux[i] - 1.5 * p.gamma * hx[i] * hx[i];
            hk.script_r[i] = c + h * h * h * w[i] / 3.0;
        }
        if (active)
        {
            hk.A = std::move(reg.A);
            hk.A_x = std::move(reg.A_x);
            hk.B = std::move(reg.B);
        }
        else
        {
            hk.A.assign(n, 0.0);
            hk.A_x.assign(n, 0.0);
            hk.B.assign(n, 0.0);
        }
        hk.P = std::move(P);
        hk.Q = std::move(Q);
        out.hooks = std::move(hk);
    }
    return out;
}

double cfl_dt(const FlowState& s, const Params& p, const Grid& g, const StepControl& c)
{
    require_valid(s, g);
    double smax = 0.0;
    for (int i = 0; i < g.n; ++i)
    {
        const double h = s.h[i];
        const double wave = std::max(std::sqrt(3.0 * p.gamma / h), std::sqrt(p.g * h));
        smax = std::max(smax, std::abs(s.u[i]) + wave);
    }
    return std::min(c.dt_max, c.cfl * g.dx / smax);
}

namespace
{

bool positive_and_finite(const FlowState& s)
{
    for (std::size_t i = 0; i < s.h.size(); ++i)
        if (!(s.h[i] > 0.0) || !std::isfinite(s.h[i]) || !std::isfinite(s.u[i]))
            return false;
    return true;
}

// One RK4 step; returns nullopt when a stage or the result loses positivity.
std::optional<StepResult> try_rk4(const FlowState& s, double dt, const Params& p, const Grid& g,
                                  double tol)
{
    const std::size_t n = s.h.size();
    auto stage = [&](const RhsEval& k, double a) {
        FlowState y{Field(n), Field(n), s.t + a * dt};
        for (std::size_t i = 0; i < n; ++i)
        {
            y.h[i] = s.h[i] + a * dt * k.dh_dt[i];
            y.u[i] = s.u[i] + a * dt * k.du_dt[i];
        }
        return y;
    };

    try
    {
        const RhsEval k1 = rhs(s, p, g, false, tol);
        const FlowState y2 = stage(k1, 0.5);
        if (!positive_and_finite(y2))
            return std::nullopt;
        const RhsEval k2 = rhs(y2, p, g, false, tol);
        const FlowState y3 = stage(k2, 0.5);
        if (!positive_and_finite(y3))
            return std::nullopt;
        const RhsEval k3 = rhs(y3, p, g, false, tol);
        const FlowState y4 = stage(k3, 1.0);
        if (!positive_and_finite(y4))
            return std::nullopt;
        const RhsEval k4 = rhs(y4, p, g, false, tol);

        StepResult r;
        r.dt = dt;
        r.state = FlowState{Field(n), Field(n), s.t + dt};
        const double w = dt / 6.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            r.state.h[i] = s.h[i] + w * (k1.dh_dt[i] + 2.0 * k2.dh_dt[i] + 2.0 * k3.dh_dt[i] + k4.dh_dt[i]);
            r.state.u[i] = s.u[i] + w * (k1.du_dt[i] + 2.0 * k2.du_dt[i] + 2.0 * k3.du_dt[i] + k4.du_dt[i]);
        }
        r.dissipation = w * (k1.dissipation_rate + 2.0 * k2.dissipation_rate
                             + 2.0 * k3.dissipation_rate + k4.dissipation_rate);
        if (!positive_and_finite(r.state))
            return std::nullopt;
        return r;
    }
    catch (const Error& e)
    {
        if (e.kind() == ErrorKind::positivity)
            return std::nullopt;
        throw;
    }
}

} // namespace

StepResult rk4_step(const FlowState& s, double dt, const Params& p, const Grid& g,
                    double far_field_tol)
{
    if (!(dt > 0.0))
        throw Error(ErrorKind::contract, "time step must be positive");
    if (auto r = try_rk4(s, dt, p, g, far_field_tol))
        return *r;
    if (auto r = try_rk4(s, 0.5 * dt, p, g, far_field_tol))
    {
        r->halved = true;
        return *r;
    }
    std::ostringstream msg;
    msg << "depth lost positivity at t = " << s.t << " even with dt = " << 0.5 * dt;
    throw Error(ErrorKind::depth_collapse, msg.str());
}

std::optional<BlowupTrigger> blowup_monitor(const FlowState& s, const Params& p, const Grid& g,
                                            const BlowupThresholds& thr, double h_min_ref)
{
    (void)p;
    const Field ux = derivative(s.u, g);
    const Field hx = derivative(s.h, g);
    BlowupTrigger t;
    t.t = s.t;
    t.max_abs_ux = max_abs(ux);
    t.max_abs_hx = max_abs(hx);
    t.min_h = *std::min_element(s.h.begin(), s.h.end());
    if (!(t.max_abs_ux > thr.ux))
        return std::nullopt;
    if (t.max_abs_hx > thr.hx)
    {
        t.code = "gradient-pair";
        return t;
    }
    if (t.min_h < thr.h_fraction * h_min_ref)
    {
        t.code = "depth-pair";
        return t;
    }
    return std::nullopt;
}

SeriesRow measure(const FlowState& s, const Params& p, const Grid& g)
{
    SeriesRow row;
    row.t = s.t;
    row.mass = total_mass(s, g);
    row.energy = total_energy(s, p, g);
    const auto [hmin, hmax] = std::minmax_element(s.h.begin(), s.h.end());
    row.min_h = *hmin;
    row.max_h = *hmax;
    row.max_abs_u = max_abs(s.u);

    const RhsEval ev = rhs(s, p, g, true, std::numeric_limits<double>::infinity());
    const RhsHooks& hk = *ev.hooks;
    const Field ux = derivative(s.u, g);
    const Field hx = derivative(s.h, g);
    row.min_ux = *std::min_element(ux.begin(), ux.end());
    row.max_abs_ux = max_abs(ux);
    row.max_abs_hx = max_abs(hx);
    row.sup_P = *std::max_element(hk.P.begin(), hk.P.end());
    row.sup_Q = *std::max_element(hk.Q.begin(), hk.Q.end());
    row.inf_P = *std::min_element(hk.P.begin(), hk.P.end());
    row.inf_Q = *std::min_element(hk.Q.begin(), hk.Q.end());
    row.dissipation_rate = ev.dissipation_rate;
    row.max_abs_script_r = max_abs(hk.script_r);
    row.max_abs_B = max_abs(hk.B);
    return row;
}

SimHistory simulate(const FlowState& s0, const Params& p, const Grid& g, const StepControl& c,
                    const MonitorConfig& monitors)
{
    p.validate();
    c.validate();
    require_valid(s0, g);

    SimHistory hist;
    hist.grid = g;
    hist.params = p;
    hist.snapshots.push_back(s0);
    hist.series.push_back(measure(s0, p, g));
    hist.E0 = hist.series.front().energy;

    double h_min_ref = *std::min_element(s0.h.begin(), s0.h.end());
    if (hist.E0 < p.energy_threshold())
        h_min_ref = a_priori_bounds(hist.E0, p).h_min;

    FlowState s = s0;
    double dissipated = 0.0;
    const double t_tol = 1e-12 * std::max(1.0, c.t_end);

    auto record_abort = [&](AbortReason reason, const std::string& detail) {
        hist.abort.reason = reason;
        hist.abort.t = s.t;
        hist.abort.detail = detail;
    };

    while (s.t < c.t_end - t_tol)
    {
        if (hist.steps >= c.max_steps)
        {
            record_abort(AbortReason::step_limit, "maximum step count reached");
            break;
        }
        try
        {
            double dt = cfl_dt(s, p, g, c);
            if (s.t + dt > c.t_end)
                dt = c.t_end - s.t;
            StepResult step = rk4_step(s, dt, p, g, monitors.far_field_tol);
            s = std::move(step.state);
            dissipated += step.dissipation;
            ++hist.steps;

            if (!all_finite(s.h) || !all_finite(s.u))
            {
                record_abort(AbortReason::non_finite, "non-finite field values");
                break;
            }
            SeriesRow row = measure(s, p, g);
            row.dissipation = dissipated;
            hist.series.push_back(row);

            const bool at_end = !(s.t < c.t_end - t_tol);
            if (hist.steps % c.output_every == 0 || at_end)
                hist.snapshots.push_back(s);

            if (monitors.blowup)
            {
                if (auto trig = blowup_monitor(s, p, g, monitors.thresholds, h_min_ref))
                {
                    record_abort(AbortReason::blowup, "blow-up criterion " + trig->code);
                    hist.abort.trigger = trig;
                    if (hist.snapshots.back().t != s.t)
                        hist.snapshots.push_back(s);
                    break;
                }
            }
        }
        catch (const Error& e)
        {
            switch (e.kind())
            {
            case ErrorKind::depth_collapse:
                record_abort(AbortReason::depth_collapse, e.what());
                break;
            case ErrorKind::boundary:
                record_abort(AbortReason::boundary_contamination, e.what());
                break;
            case ErrorKind::solver:
                record_abort(AbortReason::solver_failure, e.what());
                break;
            default:
                throw;
            }
            break;
        }
    }
    return hist;
}

} // namespace sgn
