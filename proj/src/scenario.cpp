#include "sgn/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "sgn/error.hpp"

namespace sgn
{

std::string to_string(ScenarioKind k)
{
    switch (k)
    {
    case ScenarioKind::flat: return "flat";
    case ScenarioKind::gaussian: return "gaussian";
    case ScenarioKind::sine: return "sine";
    case ScenarioKind::steep: return "steep";
    case ScenarioKind::custom: return "custom";
    }
    return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& s)
{
    if (s == "flat")
        return ScenarioKind::flat;
    if (s == "gaussian")
        return ScenarioKind::gaussian;
    if (s == "sine")
        return ScenarioKind::sine;
    if (s == "steep")
        return ScenarioKind::steep;
    if (s == "custom" || s == "custom-from-file")
        return ScenarioKind::custom;
    throw Error(ErrorKind::config, "unknown scenario kind '" + s + "'");
}

void ScenarioConfig::validate() const
{
    params.validate();
    step.validate();
    const bool periodic = grid.mode == Mode::periodic;
    if (kind == ScenarioKind::sine && !periodic)
        throw Error(ErrorKind::config, "sine scenarios need periodic mode");
    if (kind == ScenarioKind::steep && periodic)
        throw Error(ErrorKind::config, "steep scenarios need line mode");
    if (params.epsilon > 0.0 && periodic)
        throw Error(ErrorKind::config, "epsilon > 0 needs line mode");
    if (!(width > 0.0))
        throw Error(ErrorKind::config, "width must be positive");
    if (!(mollifier_epsilon >= 0.0))
        throw Error(ErrorKind::config, "mollifier_epsilon must be non-negative");
    if (kind == ScenarioKind::steep && !(half_length > 0.0))
        throw Error(ErrorKind::config, "half_length must be positive");
    if (sign != 1.0 && sign != -1.0)
        throw Error(ErrorKind::config, "sign must be +1 or -1");
    if (kind == ScenarioKind::custom && file.empty())
        throw Error(ErrorKind::config, "custom scenarios need a file");
    if (kind == ScenarioKind::sine)
    {
        if (wavenumbers.empty())
            throw Error(ErrorKind::config, "sine scenarios need at least one wavenumber");
        for (double k : wavenumbers)
        {
            const double m = k * grid.length() / (2.0 * std::numbers::pi);
            if (!(k > 0.0) || std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, m))
                throw Error(ErrorKind::config, "wavenumber " + std::to_string(k)
                                                   + " does not fit the periodic domain");
        }
    }
    if (target_energy)
    {
        if (!(*target_energy > 0.0))
            throw Error(ErrorKind::config, "target_energy must be positive");
        if (kind == ScenarioKind::flat || kind == ScenarioKind::custom)
            throw Error(ErrorKind::config, "target_energy needs a scenario with an amplitude");
    }
    if (checks.box)
    {
        const Box& b = *checks.box;
        if (!(b.t1 < b.t2 && b.a < b.b))
            throw Error(ErrorKind::config, "sweep box must have t1 < t2 and a < b");
    }
    if (!(checks.lp_alpha >= 0.0 && checks.lp_alpha < 1.0))
        throw Error(ErrorKind::config, "lp_alpha must lie in [0, 1)");
}

namespace
{

FlowState read_custom(const ScenarioConfig& cfg)
{
    std::ifstream in(cfg.file);
    if (!in)
        throw Error(ErrorKind::config, "cannot open initial data file " + cfg.file);

    std::string line;
    int col_h = 0, col_u = 1, col_x = -1;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');)
            cells.push_back(c);
        if (rows.empty() && !cells.empty() && !std::isdigit(static_cast<unsigned char>(cells[0][0]))
            && cells[0][0] != '-' && cells[0][0] != '.' && cells[0][0] != '+')
        {
            col_h = col_u = -1;
            for (int i = 0; i < static_cast<int>(cells.size()); ++i)
            {
                if (cells[i] == "h")
                    col_h = i;
                else if (cells[i] == "u")
                    col_u = i;
                else if (cells[i] == "x")
                    col_x = i;
            }
            if (col_h < 0 || col_u < 0)
                throw Error(ErrorKind::config, cfg.file + ": header needs h and u columns");
            continue;
        }
        std::vector<double> v;
        for (const std::string& c : cells)
            v.push_back(std::stod(c));
        rows.push_back(std::move(v));
    }

    const Grid& g = cfg.grid;
    if (static_cast<int>(rows.size()) != g.n)
        throw Error(ErrorKind::config, cfg.file + " has " + std::to_string(rows.size())
                                           + " rows, grid has " + std::to_string(g.n) + " cells");
    FlowState s;
    s.h.resize(g.n);
    s.u.resize(g.n);
    for (int i = 0; i < g.n; ++i)
    {
        const auto& r = rows[i];
        if (static_cast<int>(r.size()) <= std::max({col_h, col_u, col_x}))
            throw Error(ErrorKind::config, cfg.file + ": short row " + std::to_string(i));
        if (col_x >= 0 && std::abs(r[col_x] - g.x(i)) > 1e-9 * g.length())
            throw Error(ErrorKind::config, cfg.file + ": x column does not match the grid");
        s.h[i] = r[col_h];
        s.u[i] = r[col_u];
    }
    return s;
}

double sine_speed(double k, const Params& p)
{
    return dispersion_omega(k, p) / k;
}

} // namespace

FlowState build_shape(const ScenarioConfig& cfg, double a)
{
    const Grid& g = cfg.grid;
    const Params& p = cfg.params;
    FlowState s;
    s.h.assign(g.n, p.hbar);
    s.u.assign(g.n, 0.0);

    switch (cfg.kind)
    {
    case ScenarioKind::flat:
        break;
    case ScenarioKind::gaussian:
        for (int i = 0; i < g.n; ++i)
        {
            const double z = (g.x(i) - cfg.center) / cfg.width;
            s.h[i] = p.hbar + a * std::exp(-z * z);
        }
        break;
    case ScenarioKind::sine:
    {
        // Right-moving linear eigenmode: u = (omega / k) (h - hbar) / hbar.
        const double k = cfg.wavenumbers.front();
        const double c = sine_speed(k, p);
        for (int i = 0; i < g.n; ++i)
        {
            const double w = a * std::sin(k * g.x(i));
            s.h[i] = p.hbar + w;
            s.u[i] = c * w / p.hbar;
        }
        break;
    }
    case ScenarioKind::steep:
    {
        // S = u - 2 sqrt(3 gamma) h^{-1/2} is held at its rest value.
        const double c2 = 2.0 * p.st_speed();
        for (int i = 0; i < g.n; ++i)
        {
            const double x = g.x(i) - cfg.center;
            const double b = 0.5 * (std::tanh((x + cfg.half_length) / cfg.width)
                                    - std::tanh((x - cfg.half_length) / cfg.width));
            s.h[i] = p.hbar + cfg.sign * a * b;
            s.u[i] = c2 * (1.0 / std::sqrt(s.h[i]) - 1.0 / std::sqrt(p.hbar));
        }
        break;
    }
    case ScenarioKind::custom:
        s = read_custom(cfg);
        break;
    }
    return s;
}

FlowState mollify(const FlowState& s, const Params& p, const Grid& g, double sigma)
{
    require_size(s.h, g);
    require_size(s.u, g);
    if (!(sigma > 0.0))
        return s;
    const int half = static_cast<int>(std::ceil(6.0 * sigma / g.dx));
    std::vector<double> w(2 * half + 1);
    double total = 0.0;
    for (int j = -half; j <= half; ++j)
    {
        const double z = j * g.dx / sigma;
        w[j + half] = std::exp(-0.5 * z * z);
        total += w[j + half];
    }
    for (double& v : w)
        v /= total;

    FlowState out = s;
    for (int i = 0; i < g.n; ++i)
    {
        double dh = 0.0, du = 0.0;
        for (int j = -half; j <= half; ++j)
        {
            int k = i + j;
            if (g.mode == Mode::periodic)
                k = ((k % g.n) + g.n) % g.n;
            else if (k < 0 || k >= g.n)
                continue;
            dh += w[j + half] * (s.h[k] - p.hbar);
            du += w[j + half] * s.u[k];
        }
        out.h[i] = p.hbar + dh;
        out.u[i] = du;
    }
    return out;
}

FlowState build_initial(const ScenarioConfig& cfg)
{
    cfg.validate();
    auto make = [&](double a) {
        FlowState s = mollify(build_shape(cfg, a), cfg.params, cfg.grid, cfg.mollifier_epsilon);
        s.t = 0.0;
        return s;
    };

    if (!cfg.target_energy)
    {
        FlowState s = make(cfg.amplitude);
        require_valid(s, cfg.grid);
        return s;
    }

    // Energy grows monotonically with the amplitude for these shapes, so
    // bracket the target and bisect.
    const double target = *cfg.target_energy;
    auto energy_at = [&](double a) {
        const FlowState s = make(a);
        for (double h : s.h)
            if (!(h > 0.0))
                return std::numeric_limits<double>::infinity();
        return total_energy(s, cfg.params, cfg.grid);
    };
    double lo = 0.0;
    double hi = cfg.amplitude > 0.0 ? cfg.amplitude : 0.01 * cfg.params.hbar;
    for (int it = 0; energy_at(hi) < target; ++it)
    {
        lo = hi;
        hi *= 2.0;
        if (it > 60)
            throw Error(ErrorKind::config, "cannot reach target_energy");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (energy_at(mid) < target ? lo : hi) = mid;
    }
    const double e_lo = energy_at(lo), e_hi = energy_at(hi);
    FlowState s = make(std::abs(e_lo - target) <= std::abs(e_hi - target) ? lo : hi);
    require_valid(s, cfg.grid);
    return s;
}

InitialInfo initial_info(const FlowState& s, const ScenarioConfig& cfg)
{
    InitialInfo info;
    info.E0 = total_energy(s, cfg.params, cfg.grid);
    info.E_max = cfg.params.energy_threshold();
    info.bounds_apply = info.E0 < info.E_max;
    return info;
}

std::vector<ScenarioConfig> expand_wavenumbers(const ScenarioConfig& cfg)
{
    if (cfg.kind != ScenarioKind::sine || cfg.wavenumbers.size() <= 1)
        return {cfg};
    std::vector<ScenarioConfig> out;
    for (double k : cfg.wavenumbers)
    {
        ScenarioConfig c = cfg;
        c.wavenumbers = {k};
        std::ostringstream name;
        name << cfg.name << "_k" << k;
        c.name = name.str();
        out.push_back(std::move(c));
    }
    return out;
}

bool RunArtifact::pass() const
{
    return std::none_of(checks.begin(), checks.end(),
                        [](const CheckLine& c) { return c.status == CheckStatus::fail; });
}

namespace
{

std::string fmt(double v)
{
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

CheckLine line(const std::string& name, bool ok, const std::string& detail)
{
    return {name, ok ? CheckStatus::pass : CheckStatus::fail, detail};
}

void evaluate_checks(RunArtifact& art)
{
    const ScenarioConfig& cfg = art.cfg;
    const SimHistory& hist = art.history;
    auto& out = art.checks;

    // Run outcome against the scenario's expectation.
    if (cfg.expect_blowup)
    {
        const bool ok = art.blowup.triggered.has_value();
        std::string d = ok ? "triggered " + art.blowup.triggered->code + " at t = "
                                 + fmt(art.blowup.triggered->t)
                           : "no trigger (run ended: " + to_string(hist.abort.reason) + ")";
        out.push_back(line("blowup_expected", ok, d));
    }
    else
    {
        const bool ok = !hist.aborted();
        out.push_back(line("run_completed", ok,
                           ok ? "reached t = " + fmt(hist.t_final())
                              : to_string(hist.abort.reason) + " at t = " + fmt(hist.abort.t) + ": "
                                    + hist.abort.detail));
    }

    if (cfg.checks.energy && !cfg.expect_blowup)
        for (const auto& [name, v] : art.energy.verdicts)
            out.push_back(line("energy." + name, v.pass,
                               "measured " + fmt(v.measured) + ", limit " + fmt(v.limit)));

    if (cfg.checks.bounds != Toggle::off)
    {
        const BoundsReport& b = art.bounds;
        if (b.status == CheckStatus::skipped)
        {
            CheckLine c{"bounds", cfg.checks.bounds == Toggle::on ? CheckStatus::fail : CheckStatus::skipped,
                        "skipped: " + b.reason};
            out.push_back(c);
        }
        else
        {
            out.push_back(line("bounds", b.status == CheckStatus::pass,
                               "min h " + fmt(b.min_h) + " vs " + fmt(b.bounds.h_min) + ", max h "
                                   + fmt(b.max_h) + " vs " + fmt(b.bounds.h_max) + ", max |u| "
                                   + fmt(b.max_abs_u) + " vs " + fmt(b.bounds.u_max)));
        }
    }

    if (cfg.checks.oleinik)
    {
        const OleinikReport& o = art.oleinik;
        std::string d = "fitted C " + fmt(o.fitted_C);
        if (o.C)
            d += ", " + std::to_string(o.violations) + " violations of C = " + fmt(*o.C);
        out.push_back(line("oleinik", o.clean(), d));
    }

    if (cfg.checks.phase_speed && art.phase_speed)
    {
        const double k = cfg.wavenumbers.front();
        const double expected = dispersion_omega(k, cfg.params) / k;
        const auto& ps = *art.phase_speed;
        if (!ps.speed)
        {
            out.push_back(line("phase_speed k=" + fmt(k), false, "measurement " + ps.status));
        }
        else
        {
            const double rel = std::abs(*ps.speed - expected) / expected;
            out.push_back(line("phase_speed k=" + fmt(k), rel <= cfg.checks.phase_tol,
                               "measured " + fmt(*ps.speed) + ", expected " + fmt(expected)
                                   + ", relative error " + fmt(rel)));
        }
    }
}

} // namespace

RunArtifact run_scenario(const ScenarioConfig& cfg)
{
    const auto start = std::chrono::steady_clock::now();
    RunArtifact art;
    art.cfg = cfg;
    const FlowState s0 = build_initial(cfg);
    art.initial = initial_info(s0, cfg);
    art.history = simulate(s0, cfg.params, cfg.grid, cfg.step, cfg.monitors);
    art.energy = energy_budget(art.history, cfg.checks.energy_tol);
    art.bounds = bounds_check(art.history, cfg.checks.bounds_tol);
    art.oleinik = oleinik_report(art.history, cfg.checks.oleinik_C);
    art.blowup = blowup_report(art.history);
    if (cfg.kind == ScenarioKind::sine && cfg.checks.phase_speed)
        art.phase_speed = measure_phase_speed(art.history, cfg.wavenumbers.front());
    evaluate_checks(art);
    art.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return art;
}

namespace
{

/// State at time t by four-point Lagrange interpolation over snapshots.
FlowState state_at(const SimHistory& hist, double t)
{
    const auto& sn = hist.snapshots;
    const std::size_t m = sn.size();
    std::size_t j = 0;
    while (j + 1 < m && sn[j + 1].t < t)
        ++j;
    // Stencil of up to four snapshots around [t_j, t_{j+1}].
    std::size_t first = j > 0 ? j - 1 : 0;
    std::size_t count = std::min<std::size_t>(4, m);
    if (first + count > m)
        first = m - count;

    FlowState out;
    out.t = t;
    out.h.assign(sn[0].h.size(), 0.0);
    out.u.assign(sn[0].u.size(), 0.0);
    for (std::size_t a = first; a < first + count; ++a)
    {
        double w = 1.0;
        for (std::size_t b = first; b < first + count; ++b)
            if (b != a)
                w *= (t - sn[b].t) / (sn[a].t - sn[b].t);
        for (std::size_t i = 0; i < out.h.size(); ++i)
        {
            out.h[i] += w * sn[a].h[i];
            out.u[i] += w * sn[a].u[i];
        }
    }
    return out;
}

} // namespace

std::optional<double> box_difference(const SimHistory& a, const SimHistory& b, const Box& box,
                                     bool depth)
{
    if (a.grid.n != b.grid.n || a.grid.dx != b.grid.dx || a.grid.x_left != b.grid.x_left)
        throw Error(ErrorKind::contract, "box difference needs runs on the same grid");
    for (const SimHistory* h : {&a, &b})
        if (h->snapshots.size() < 2 || h->snapshots.front().t > box.t1 || h->snapshots.back().t < box.t2)
            return std::nullopt;

    const Grid& g = a.grid;
    constexpr int samples = 32;
    std::vector<double> f(samples + 1);
    for (int j = 0; j <= samples; ++j)
    {
        const double t = box.t1 + (box.t2 - box.t1) * j / samples;
        const FlowState sa = state_at(a, t);
        const FlowState sb = state_at(b, t);
        double sum = 0.0;
        for (int i = 0; i < g.n; ++i)
        {
            const double x = g.x(i);
            if (x < box.a || x > box.b)
                continue;
            const double d = depth ? sa.h[i] - sb.h[i] : sa.u[i] - sb.u[i];
            sum += d * d;
        }
        f[j] = sum * g.dx;
    }
    double total = 0.0;
    const double dt = (box.t2 - box.t1) / samples;
    for (int j = 1; j <= samples; ++j)
        total += 0.5 * (f[j] + f[j - 1]) * dt;
    return std::sqrt(total);
}

bool SweepResult::pass() const
{
    auto ok = [](const CheckLine& c) { return c.status != CheckStatus::fail; };
    return std::all_of(checks.begin(), checks.end(), ok)
           && std::all_of(runs.begin(), runs.end(), [](const RunArtifact& r) { return r.pass(); });
}

SweepResult epsilon_sweep(const ScenarioConfig& cfg, const std::vector<double>& epsilons)
{
    if (epsilons.empty())
        throw Error(ErrorKind::config, "sweep needs at least one epsilon");
    for (std::size_t i = 0; i < epsilons.size(); ++i)
    {
        if (!(epsilons[i] > 0.0))
            throw Error(ErrorKind::config, "sweep epsilons must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw Error(ErrorKind::config, "sweep epsilons must be strictly decreasing");
    }
    if (cfg.grid.mode != Mode::line)
        throw Error(ErrorKind::config, "sweeps need line mode");

    std::vector<ScenarioConfig> cfgs;
    for (double eps : epsilons)
    {
        ScenarioConfig c = cfg;
        c.params.epsilon = eps;
        c.mollifier_epsilon = cfg.sweep_mollifier ? *cfg.sweep_mollifier : eps;
        std::ostringstream name;
        name << cfg.name << "_eps" << eps;
        c.name = name.str();
        c.validate();
        cfgs.push_back(std::move(c));
    }

    std::vector<std::future<RunArtifact>> jobs;
    for (const ScenarioConfig& c : cfgs)
        jobs.push_back(std::async(std::launch::async, [c] { return run_scenario(c); }));

    SweepResult res;
    for (auto& j : jobs)
        res.runs.push_back(j.get());

    // Successive differences on the box.
    const std::optional<Box> box = cfg.checks.box;
    for (std::size_t i = 0; i + 1 < res.runs.size(); ++i)
    {
        SweepPair pair{epsilons[i], epsilons[i + 1], std::nullopt, std::nullopt};
        if (box)
        {
            pair.l2_h = box_difference(res.runs[i].history, res.runs[i + 1].history, *box, true);
            pair.l2_u = box_difference(res.runs[i].history, res.runs[i + 1].history, *box, false);
        }
        res.table.push_back(pair);
    }

    if (box && res.table.size() >= 1)
    {
        bool complete = true, dec_h = true, dec_u = true;
        for (std::size_t i = 0; i < res.table.size(); ++i)
        {
            const SweepPair& p = res.table[i];
            complete = complete && p.l2_h && p.l2_u;
            if (i > 0 && complete)
            {
                dec_h = dec_h && *p.l2_h < *res.table[i - 1].l2_h;
                dec_u = dec_u && *p.l2_u < *res.table[i - 1].l2_u;
            }
        }
        std::ostringstream dh, du;
        for (const SweepPair& p : res.table)
        {
            dh << (p.l2_h ? fmt(*p.l2_h) : "missing") << " ";
            du << (p.l2_u ? fmt(*p.l2_u) : "missing") << " ";
        }
        if (res.table.size() >= 2)
        {
            res.checks.push_back(line("cauchy_h", complete && dec_h, "successive L2 differences " + dh.str()));
            res.checks.push_back(line("cauchy_u", complete && dec_u, "successive L2 differences " + du.str()));
        }
    }

    // One constant for every Oleinik series.
    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    bool finite = true;
    for (const RunArtifact& r : res.runs)
    {
        finite = finite && std::isfinite(r.oleinik.fitted_C) && !r.history.aborted();
        cmin = std::min(cmin, r.oleinik.fitted_C);
        cmax = std::max(cmax, r.oleinik.fitted_C);
    }
    res.common_C = cmax;
    res.oleinik_ratio = cmin > 0.0 ? cmax / cmin : std::numeric_limits<double>::infinity();
    if (cmax == 0.0)
        res.oleinik_ratio = 1.0;
    res.checks.push_back(line("oleinik_common_C", finite && res.oleinik_ratio <= cfg.checks.oleinik_ratio_max,
                              "common C " + fmt(res.common_C) + ", max/min fitted C "
                                  + fmt(res.oleinik_ratio)));

    if (box)
    {
        double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0;
        bool all = true;
        for (const RunArtifact& r : res.runs)
        {
            std::optional<double> v;
            try
            {
                v = lp_box_norm(r.history, cfg.checks.lp_alpha, *box).value;
            }
            catch (const Error& e)
            {
                if (e.kind() != ErrorKind::range)
                    throw;
            }
            res.lp_norms.push_back(v);
            all = all && v.has_value();
            if (v)
            {
                lmin = std::min(lmin, *v);
                lmax = std::max(lmax, *v);
            }
        }
        res.lp_ratio = all && lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
        if (all && lmax == 0.0)
            res.lp_ratio = 1.0;
        res.checks.push_back(line("lp_box_ratio", all && res.lp_ratio <= cfg.checks.lp_ratio_max,
                                  "max/min " + fmt(res.lp_ratio) + " (alpha " + fmt(cfg.checks.lp_alpha) + ")"));
    }

    // Mollified energies rise toward the unmollified value as epsilon shrinks.
    bool rising = true;
    for (std::size_t i = 1; i < res.runs.size(); ++i)
        rising = rising && res.runs[i].initial.E0 >= res.runs[i - 1].initial.E0;
    res.checks.push_back(line("initial_energy_trend", rising, "E0 non-decreasing as epsilon decreases"));
    return res;
}

} // namespace sgn
