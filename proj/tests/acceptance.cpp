// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "sgn/characteristics.hpp"
#include "sgn/config.hpp"
#include "sgn/elliptic.hpp"
#include "sgn/scenario.hpp"

using namespace sgn;

namespace
{

const std::string cfg_dir = SGN_CONFIG_DIR;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ScenarioConfig config(const std::string& name)
{
    return load_config(cfg_dir + "/" + name);
}

double order(double coarse, double fine, double ratio = 2.0)
{
    return std::log(coarse / fine) / std::log(ratio);
}

Outcome energy_conservation()
{
    const auto t0 = std::chrono::steady_clock::now();
    const RunArtifact art = run_scenario(config("gaussian.cfg"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double E0 = art.history.series.front().energy, ET = art.history.series.back().energy;
    const double drift = std::abs(ET - E0) / E0;
    const bool ok = !art.history.aborted() && art.history.t_final() >= 5.0 - 1e-9 && drift <= 1e-6 && secs < 60;
    return {ok, fmt("|E(T)-E(0)|/E(0) = %.3g at T = %g (limit 1e-6), %.1f s", drift, art.history.t_final(), secs)};
}

Outcome energy_budget_closure()
{
    const RunArtifact art = run_scenario(config("steep_budget.cfg"));
    const auto& v = art.energy.verdicts;
    bool active = false;
    for (const SeriesRow& r : art.history.series)
        active = active || r.dissipation_rate < 0.0;
    const bool ok = !art.history.aborted() && active && v.count("monotonicity") && v.at("monotonicity").pass
                    && v.count("budget_closure") && v.at("budget_closure").pass;
    return {ok, fmt("largest step increase %.3g (slack %.3g), budget residual %.3g (limit %.3g), dissipation %.4g",
                    art.energy.max_step_increase, v.at("monotonicity").limit, std::abs(art.energy.budget_residual),
                    v.at("budget_closure").limit, art.energy.dissipation_integral)};
}

Outcome a_priori()
{
    const RunArtifact art = run_scenario(config("bounds.cfg"));
    const BoundsReport& b = art.bounds;
    const bool e0_ok = std::abs(art.initial.E0 - 0.0981) <= 1e-9;
    const bool ok = !art.history.aborted() && e0_ok && b.min_h >= 0.9 - 1e-4 && b.max_abs_u <= 0.45802 + 1e-4;
    return {ok, fmt("E0 = %.10g, min h = %.6g (>= 0.8999), max |u| = %.6g (<= 0.45812)", art.initial.E0, b.min_h,
                    b.max_abs_u)};
}

Outcome dispersion()
{
    double worst = 0.0;
    bool ok = true;
    std::string ks;
    for (const char* file : {"dispersion.cfg", "dispersion_b3.cfg"})
    {
        const ScenarioConfig base = config(file);
        const bool b3 = std::abs(bond_number(base.params) - 3.0) < 1e-12;
        for (const ScenarioConfig& c : expand_wavenumbers(base))
        {
            ScenarioConfig cc = c;
            cc.checks.phase_speed = true;
            const RunArtifact art = run_scenario(cc);
            const double k = cc.wavenumbers.front();
            const double expect = b3 ? std::sqrt(cc.params.g * cc.params.hbar) : dispersion_omega(k, cc.params) / k;
            if (!art.phase_speed || !art.phase_speed->speed)
            {
                ok = false;
                continue;
            }
            const double rel = std::abs(*art.phase_speed->speed - expect) / expect;
            worst = std::max(worst, rel);
            ok = ok && rel <= 0.01;
            ks += fmt(" %s%g", b3 ? "B3:k=" : "k=", k);
        }
    }
    return {ok, fmt("worst relative phase-speed error %.3g over%s (limit 0.01)", worst, ks.c_str())};
}

Outcome operators()
{
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> H(0.5, 2.0), U(-1.0, 1.0);
    double worst_rt = 0.0, worst_mp = 0.0;
    for (int trial = 0; trial < 200; ++trial)
    {
        const Grid g = Grid::make(256, 0.0, 10.0, trial % 2 ? Mode::line : Mode::periodic);
        Field h(g.n), psi(g.n);
        double inv_h = 0.0;
        for (int i = 0; i < g.n; ++i)
        {
            h[i] = H(rng);
            psi[i] = U(rng);
            inv_h = std::max(inv_h, 1.0 / h[i]);
        }
        const TridiagonalSystem L = assemble_L(h, g);
        const Field u = solve_L(L, psi);
        const Field back = apply_L(L, u);
        double rt = 0.0;
        for (int i = 0; i < g.n; ++i)
            rt = std::max(rt, std::abs(back[i] - psi[i]));
        worst_rt = std::max(worst_rt, rt / max_abs(psi));
        worst_mp = std::max(worst_mp, max_abs(u) / (inv_h * max_abs(psi)));
    }
    double r[3];
    int idx = 0;
    for (int n : {256, 512, 1024})
    {
        const Grid g = Grid::make(n, -12.0, 12.0, Mode::line);
        Field h(n), psi(n);
        for (int i = 0; i < n; ++i)
        {
            const double x = g.x(i);
            h[i] = 1.0 + 0.1 * std::exp(-(x - 0.5) * (x - 0.5));
            psi[i] = std::exp(-x * x);
        }
        r[idx++] = psi_identity_residual(h, psi, g);
    }
    const double o1 = order(r[0], r[1]), o2 = order(r[1], r[2]);
    const bool ok = worst_rt <= 1e-10 && worst_mp <= 1.0 && o1 >= 1.5 && o2 >= 1.5;
    return {ok, fmt("round trip %.2g (limit 1e-10), max-principle ratio %.4f (<= 1), identity orders %.2f %.2f (>= 1.5)",
                    worst_rt, worst_mp, o1, o2)};
}

double riccati_level(int lev)
{
    const int n = 256 << lev;
    const Params p;
    const Grid g = Grid::make(n, -20.0, 20.0, Mode::periodic);
    FlowState s{Field(n), Field(n), 0.0};
    for (int i = 0; i < n; ++i)
    {
        const double x = g.x(i);
        s.h[i] = 1 + 0.1 * std::exp(-x * x / 4);
        s.u[i] = 0.2 * std::exp(-(x - 1) * (x - 1) / 4);
    }
    StepControl c;
    c.cfl = 1.0;
    c.dt_max = 0.004 / (1 << lev);
    c.t_end = 0.5;
    c.output_every = 5;
    const SimHistory hist = simulate(s, p, g, c);
    const CharFields cf = char_fields(hist, true);
    double m = 0.0;
    for (Branch b : {Branch::plus, Branch::minus})
        for (int j = 0; j < 8; ++j)
            m = std::max(m, riccati_residual(hist, cf, trace(hist, cf, -4.0 + j, b)).max_abs());
    return m;
}

Outcome riccati()
{
    const double r0 = riccati_level(0), r1 = riccati_level(1), r2 = riccati_level(2);
    const double o1 = order(r0, r1), o2 = order(r1, r2);
    return {o1 >= 1.0 && o2 >= 1.0,
            fmt("max residual %.3g, %.3g, %.3g over 16 paths; orders %.2f %.2f (>= 1)", r0, r1, r2, o1, o2)};
}

Outcome blowup_vs_regularization()
{
    const RunArtifact a = run_scenario(config("steep_eps0.cfg"));
    const RunArtifact b = run_scenario(config("steep_eps01.cfg"));
    const auto& trig = a.history.abort.trigger;
    const bool blew = a.history.abort.reason == AbortReason::blowup && trig && trig->code == "gradient-pair"
                      && trig->t < 2.0;
    double pq = 0.0;
    bool finite = true;
    for (const SeriesRow& r : b.history.series)
    {
        for (double v : {r.sup_P, r.sup_Q, r.inf_P, r.inf_Q})
        {
            finite = finite && std::isfinite(v);
            pq = std::max(pq, std::abs(v));
        }
    }
    const bool survived = !b.history.aborted() && b.history.t_final() >= 2.0 - 1e-9 && finite && b.oleinik.clean();
    return {blew && survived,
            fmt("eps=0: %s at t = %.4g; eps=0.1: reached t = %g, max(|P|,|Q|) = %.4g, Oleinik fitted C = %.4g, "
                "%d violations",
                trig ? trig->code.c_str() : "no trigger", trig ? trig->t : a.history.t_final(),
                b.history.t_final(), pq, b.oleinik.fitted_C, b.oleinik.violations)};
}

Outcome uniform_in_eps(const SweepResult& s)
{
    bool runs_ok = true;
    for (const RunArtifact& r : s.runs)
        runs_ok = runs_ok && !r.history.aborted() && r.oleinik.clean();
    bool lp_ok = s.lp_norms.size() == s.runs.size();
    for (const auto& v : s.lp_norms)
        lp_ok = lp_ok && v && std::isfinite(*v) && *v > 0;
    const bool ok = runs_ok && lp_ok && std::isfinite(s.common_C) && s.oleinik_ratio <= 3.0 && s.lp_ratio <= 3.0;
    return {ok, fmt("common Oleinik C = %.4g (fitted max/min %.3f), L^2.5 box norm max/min %.3f (limit 3)",
                    s.common_C, s.oleinik_ratio, s.lp_ratio)};
}

Outcome cauchy(const SweepResult& s)
{
    if (s.table.size() != 2 || !s.table[0].l2_h || !s.table[1].l2_h || !s.table[0].l2_u || !s.table[1].l2_u)
        return {false, "missing sweep pairs"};
    const double h0 = *s.table[0].l2_h, h1 = *s.table[1].l2_h, u0 = *s.table[0].l2_u, u1 = *s.table[1].l2_u;
    return {h0 > h1 && u0 > u1, fmt("||h^0.2-h^0.1|| = %.4g > ||h^0.1-h^0.05|| = %.4g; u: %.4g > %.4g", h0, h1, u0, u1)};
}

Outcome temporal_and_spatial()
{
    // RK4 self-convergence against a dt/4 reference
    const Params p;
    const Grid g = Grid::make(256, -20.0, 20.0, Mode::periodic);
    FlowState s0{Field(g.n), Field(g.n, 0.0), 0.0};
    for (int i = 0; i < g.n; ++i)
        s0.h[i] = 1.0 + 0.1 * std::exp(-g.x(i) * g.x(i) / 4);
    const double T = 0.5;
    auto advance = [&](int steps) {
        FlowState s = s0;
        for (int k = 0; k < steps; ++k)
            s = rk4_step(s, T / steps, p, g).state;
        return s;
    };
    const FlowState a = advance(50), b = advance(100), ref = advance(400);
    auto err = [&](const FlowState& x) {
        double e = 0.0;
        for (int i = 0; i < g.n; ++i)
            e = std::max({e, std::abs(x.h[i] - ref.h[i]), std::abs(x.u[i] - ref.u[i])});
        return e;
    };
    const double ot = order(err(a), err(b));

    // elliptic solves: grids with ratio 3 share cell centres
    auto hf = [](double x) { return 1.0 + 0.3 * std::sin(x) + 0.1 * std::cos(3 * x); };
    auto pf = [](double x) { return std::cos(2 * x) + 0.5 * std::sin(x); };
    std::vector<Field> uL, uH;
    const std::vector<int> ns{64, 192, 576};
    for (int n : ns)
    {
        const Grid gn = Grid::make(n, 0.0, 2 * 3.14159265358979323846, Mode::periodic);
        Field h(n), psi(n);
        for (int i = 0; i < n; ++i)
        {
            h[i] = hf(gn.x(i));
            psi[i] = pf(gn.x(i));
        }
        uL.push_back(solve_L(assemble_L(h, gn), psi));
        uH.push_back(solve_helmholtz(psi, p, gn));
    }
    auto self_order = [&](const std::vector<Field>& u) {
        double d0 = 0.0, d1 = 0.0;
        for (int i = 0; i < ns[0]; ++i)
            d0 = std::max(d0, std::abs(u[0][i] - u[1][3 * i + 1]));
        for (int i = 0; i < ns[1]; ++i)
            d1 = std::max(d1, std::abs(u[1][i] - u[2][3 * i + 1]));
        return order(d0, d1, 3.0);
    };
    const double oL = self_order(uL), oH = self_order(uH);
    return {ot >= 3.8 && oL >= 1.9 && oH >= 1.9,
            fmt("RK4 order %.2f (>= 3.8); L solve order %.2f, Helmholtz order %.2f (>= 1.9)", ot, oL, oH)};
}

} // namespace

int main()
{
    int failures = 0;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
        Outcome o;
        try
        {
            o = f();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s  criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "energy conservation, eps = 0", energy_conservation);
    report(2, "energy dissipation and budget, eps > 0", energy_budget_closure);
    report(3, "a-priori bounds", a_priori);
    report(4, "dispersion relation", dispersion);
    report(5, "elliptic operator suite", operators);
    report(6, "Riccati consistency", riccati);
    report(7, "blow-up vs regularization", blowup_vs_regularization);

    SweepResult sweep;
    std::string sweep_error;
    try
    {
        sweep = epsilon_sweep(config("sweep.cfg"), {0.2, 0.1, 0.05});
    }
    catch (const std::exception& e)
    {
        sweep_error = e.what();
    }
    auto with_sweep = [&](auto f) {
        return [&, f]() -> Outcome {
            if (!sweep_error.empty())
                return {false, "sweep failed: " + sweep_error};
            return f(sweep);
        };
    };
    report(8, "uniform-in-eps diagnostics", with_sweep(uniform_in_eps));
    report(9, "eps -> 0 Cauchy behaviour", with_sweep(cauchy));
    report(10, "temporal and spatial convergence", temporal_and_spatial);

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
