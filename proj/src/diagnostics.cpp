#include "sgn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "sgn/error.hpp"

namespace sgn
{

std::string to_string(CheckStatus s)
{
    switch (s)
    {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    }
    return "unknown";
}

bool EnergyReport::pass() const
{
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second.pass; });
}

EnergyReport energy_budget(const SimHistory& hist, const EnergyTolerances& tol)
{
    EnergyReport rep;
    if (hist.series.empty())
        return rep;

    const double E0 = hist.series.front().energy;
    for (std::size_t k = 0; k < hist.series.size(); ++k)
    {
        const SeriesRow& r = hist.series[k];
        rep.series.push_back({r.t, r.mass, r.energy});
        rep.max_abs_drift = std::max(rep.max_abs_drift, std::abs(r.energy - E0));
        if (k > 0)
            rep.max_step_increase = std::max(rep.max_step_increase, r.energy - hist.series[k - 1].energy);
    }
    const double ET = hist.series.back().energy;
    rep.dissipation_integral = hist.series.back().dissipation;
    rep.budget_residual = ET - E0 - rep.dissipation_integral;

    if (hist.params.epsilon == 0.0)
    {
        Verdict v;
        v.measured = E0 > 0.0 ? std::abs(ET - E0) / E0 : std::abs(ET - E0);
        v.limit = tol.conservation_rel;
        v.pass = v.measured <= v.limit;
        v.note = "|E(T) - E(0)| / E(0)";
        rep.verdicts["conservation"] = v;
    }
    else
    {
        Verdict mono;
        mono.measured = rep.max_step_increase;
        mono.limit = tol.monotone_slack_rel * E0;
        mono.pass = mono.measured <= mono.limit;
        mono.note = "largest per-step energy increase";
        rep.verdicts["monotonicity"] = mono;

        Verdict closure;
        closure.measured = std::abs(rep.budget_residual);
        closure.limit = std::max(tol.budget_rel * std::abs(ET - E0), tol.budget_floor_rel * E0);
        closure.pass = closure.measured <= closure.limit;
        closure.note = "|E(T) - E(0) - dissipation integral|";
        rep.verdicts["budget_closure"] = closure;

        Verdict sign;
        sign.measured = rep.dissipation_integral;
        sign.limit = 0.0;
        sign.pass = rep.dissipation_integral <= 0.0;
        sign.note = "dissipation integral is never positive";
        rep.verdicts["dissipation_sign"] = sign;
    }
    return rep;
}

BoundsReport bounds_check(const SimHistory& hist, double tol)
{
    BoundsReport rep;
    if (hist.series.empty())
    {
        rep.reason = "empty history";
        return rep;
    }
    rep.min_h = hist.series.front().min_h;
    rep.max_h = hist.series.front().max_h;
    for (const SeriesRow& r : hist.series)
    {
        rep.min_h = std::min(rep.min_h, r.min_h);
        rep.max_h = std::max(rep.max_h, r.max_h);
        rep.max_abs_u = std::max(rep.max_abs_u, r.max_abs_u);
    }

    try
    {
        rep.bounds = a_priori_bounds(hist.E0, hist.params);
    }
    catch (const Error& e)
    {
        if (e.kind() != ErrorKind::threshold)
            throw;
        rep.status = CheckStatus::skipped;
        rep.reason = e.what();
        return rep;
    }
    rep.margin_h_min = rep.min_h - rep.bounds.h_min;
    rep.margin_h_max = rep.bounds.h_max - rep.max_h;
    rep.margin_u = rep.bounds.u_max - rep.max_abs_u;
    const bool ok = rep.margin_h_min >= -tol && rep.margin_h_max >= -tol && rep.margin_u >= -tol;
    rep.status = ok ? CheckStatus::pass : CheckStatus::fail;
    return rep;
}

OleinikReport oleinik_report(const SimHistory& hist, std::optional<double> C)
{
    OleinikReport rep;
    rep.C = C;
    for (const SeriesRow& r : hist.series)
    {
        if (!(r.t > 0.0))
            continue;
        rep.series.push_back({r.t, r.sup_P, r.sup_Q, r.min_h});
        const double lhs = std::max(r.sup_P, r.sup_Q) / r.min_h;
        const double weight = 1.0 + 1.0 / r.t;
        rep.fitted_C = std::max(rep.fitted_C, lhs / weight);
        if (!std::isfinite(lhs))
            rep.fitted_C = lhs;
        if (C && !(lhs <= *C * weight))
            ++rep.violations;
    }
    return rep;
}

BlowupReport blowup_report(const SimHistory& hist)
{
    BlowupReport rep;
    for (const SeriesRow& r : hist.series)
        rep.series.push_back({r.t, r.min_ux, r.max_abs_hx, r.min_h});
    if (hist.abort.reason == AbortReason::blowup)
        rep.triggered = hist.abort.trigger;
    return rep;
}

BoxNorm lp_box_norm(const SimHistory& hist, double alpha, const Box& box)
{
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw Error(ErrorKind::contract, "alpha must lie in [0, 1)");
    const auto& snaps = hist.snapshots;
    const Grid& g = hist.grid;
    if (snaps.size() < 3)
        throw Error(ErrorKind::range, "box norm needs at least three snapshots");
    if (!(box.t1 < box.t2 && box.a < box.b) || box.t1 < snaps.front().t || box.t2 > snaps.back().t
        || box.a < g.x_left || box.b > g.x_right())
        throw Error(ErrorKind::range, "box lies outside the recorded history");

    std::vector<double> ts;
    for (const FlowState& s : snaps)
        ts.push_back(s.t);

    const double q = 2.0 + alpha;
    std::vector<double> tk, fk;
    for (std::size_t k = 0; k < snaps.size(); ++k)
    {
        if (ts[k] < box.t1 || ts[k] > box.t2)
            continue;
        const TimeStencil st = time_stencil(ts, k);
        const Field hx = derivative(snaps[k].h, g);
        const Field ux = derivative(snaps[k].u, g);
        double sum = 0.0;
        for (int i = 0; i < g.n; ++i)
        {
            const double x = g.x(i);
            if (x < box.a || x > box.b)
                continue;
            double ht = 0.0, ut = 0.0;
            // differences against snapshot k keep constants exactly stationary
            for (int j = 0; j < 3; ++j)
            {
                ht += st.w[j] * (snaps[st.first + j].h[i] - snaps[k].h[i]);
                ut += st.w[j] * (snaps[st.first + j].u[i] - snaps[k].u[i]);
            }
            sum += std::pow(std::abs(ht), q) + std::pow(std::abs(hx[i]), q)
                   + std::pow(std::abs(ut), q) + std::pow(std::abs(ux[i]), q);
        }
        tk.push_back(ts[k]);
        fk.push_back(sum * g.dx);
    }

    BoxNorm out;
    out.time_samples = static_cast<int>(tk.size());
    for (std::size_t k = 1; k < tk.size(); ++k)
        out.value += 0.5 * (fk[k] + fk[k - 1]) * (tk[k] - tk[k - 1]);
    if (out.time_samples < 16)
        out.warning = "only " + std::to_string(out.time_samples) + " snapshots inside the box (want 16)";
    return out;
}

double dispersion_omega(double k, const Params& p)
{
    if (!(k > 0.0))
        throw Error(ErrorKind::contract, "wavenumber must be positive");
    const double hb = p.hbar;
    const double w2 = p.g * hb * k * k * (1.0 + p.gamma * k * k / p.g) / (1.0 + hb * hb * k * k / 3.0);
    return std::sqrt(w2);
}

double bond_number(const Params& p)
{
    p.validate();
    return p.g * p.hbar * p.hbar / p.gamma;
}

PhaseSpeed measure_phase_speed(const SimHistory& hist, double k)
{
    const Grid& g = hist.grid;
    PhaseSpeed out;
    if (g.mode != Mode::periodic)
        throw Error(ErrorKind::mode, "phase speed measurement needs a periodic run");
    if (hist.snapshots.size() < 2)
        throw Error(ErrorKind::contract, "phase speed measurement needs two snapshots");

    auto coefficient = [&](const FlowState& s) {
        std::complex<double> c = 0.0;
        for (int i = 0; i < g.n; ++i)
            c += (s.h[i] - hist.params.hbar) * std::polar(1.0, -k * g.x(i));
        return c * g.dx;
    };

    const std::complex<double> c0 = coefficient(hist.snapshots.front());
    if (!(std::abs(c0) > 1e-15 * g.length() * hist.params.hbar))
    {
        out.status = "undefined";
        return out;
    }

    double phase = 0.0;
    std::complex<double> prev = c0;
    double amp_max = std::abs(c0);
    for (std::size_t k2 = 1; k2 < hist.snapshots.size(); ++k2)
    {
        const std::complex<double> c = coefficient(hist.snapshots[k2]);
        phase += std::arg(c / prev);
        prev = c;
        amp_max = std::max(amp_max, std::abs(c));
    }
    const double elapsed = hist.snapshots.back().t - hist.snapshots.front().t;
    if (!(elapsed > 0.0))
    {
        out.status = "undefined";
        return out;
    }
    // h - hbar ~ sin(k (x - c t)) puts exp(-i k c t) on the coefficient.
    out.speed = -phase / (k * elapsed);
    out.status = amp_max > 10.0 * std::abs(c0) ? "warning: amplitude grew beyond the linear regime" : "ok";
    return out;
}

} // namespace sgn
