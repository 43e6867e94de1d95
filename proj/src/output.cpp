#include "sgn/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sgn/config.hpp"
#include "sgn/error.hpp"
#include "sgn/version.hpp"

namespace sgn
{

using nlohmann::json;

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace
{

void dump(const json& j, int indent, int depth, std::ostringstream& o)
{
    const std::string pad(indent > 0 ? indent * (depth + 1) : 0, ' ');
    const std::string close_pad(indent > 0 ? indent * depth : 0, ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type())
    {
    case json::value_t::object:
    {
        if (j.empty())
        {
            o << "{}";
            return;
        }
        o << "{" << nl;
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it)
        {
            if (!first)
                o << "," << nl;
            first = false;
            o << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
            dump(it.value(), indent, depth + 1, o);
        }
        o << nl << close_pad << "}";
        return;
    }
    case json::value_t::array:
    {
        if (j.empty())
        {
            o << "[]";
            return;
        }
        o << "[" << nl;
        for (std::size_t i = 0; i < j.size(); ++i)
        {
            if (i > 0)
                o << "," << nl;
            o << pad;
            dump(j[i], indent, depth + 1, o);
        }
        o << nl << close_pad << "]";
        return;
    }
    case json::value_t::number_float:
    {
        const double v = j.get<double>();
        o << (std::isfinite(v) ? format_number(v) : "null");
        return;
    }
    default:
        o << j.dump();
    }
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::config, "cannot write " + path.string());
    return out;
}

json opt(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

json checks_json(const std::vector<CheckLine>& checks)
{
    json a = json::array();
    for (const CheckLine& c : checks)
        a.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    return a;
}

} // namespace

std::string dump_json(const json& j, int indent)
{
    std::ostringstream o;
    dump(j, indent, 0, o);
    return o.str();
}

void write_snapshot_csv(const std::filesystem::path& path, const FlowState& s, const Params& p,
                        const Grid& g)
{
    const auto [P, Q] = pq_fields(s, p, g);
    std::ofstream out = open_out(path);
    out << "x,h,u,P,Q\n";
    for (int i = 0; i < g.n; ++i)
        out << format_number(g.x(i)) << ',' << format_number(s.h[i]) << ',' << format_number(s.u[i]) << ','
            << format_number(P[i]) << ',' << format_number(Q[i]) << '\n';
}

void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesRow>& series)
{
    std::ofstream out = open_out(path);
    out << "t,mass,energy,min_h,min_ux,max_abs_hx,sup_P,sup_Q,max_h,max_abs_u,max_abs_ux,inf_P,inf_Q,"
           "dissipation,dissipation_rate,max_abs_script_r,max_abs_B\n";
    for (const SeriesRow& r : series)
    {
        const double cols[] = {r.t,          r.mass,       r.energy,     r.min_h,        r.min_ux,
                               r.max_abs_hx, r.sup_P,      r.sup_Q,      r.max_h,        r.max_abs_u,
                               r.max_abs_ux, r.inf_P,      r.inf_Q,      r.dissipation,  r.dissipation_rate,
                               r.max_abs_script_r, r.max_abs_B};
        bool first = true;
        for (double c : cols)
        {
            out << (first ? "" : ",") << format_number(c);
            first = false;
        }
        out << '\n';
    }
}

json artifact_json(const RunArtifact& art)
{
    const SimHistory& h = art.history;
    json j;
    j["name"] = art.cfg.name;
    j["version"] = version_string();
    j["config"] = to_ini(art.cfg);
    j["wall_seconds"] = art.wall_seconds;
    j["pass"] = art.pass();
    j["steps"] = h.steps;
    j["t_final"] = h.t_final();
    j["initial"] = {{"E0", art.initial.E0}, {"E_max", art.initial.E_max}, {"bounds_apply", art.initial.bounds_apply}};

    json ab = {{"reason", to_string(h.abort.reason)}, {"t", h.abort.t}, {"detail", h.abort.detail}};
    if (h.abort.trigger)
    {
        const BlowupTrigger& t = *h.abort.trigger;
        ab["trigger"] = {{"t", t.t},
                         {"code", t.code},
                         {"max_abs_ux", t.max_abs_ux},
                         {"max_abs_hx", t.max_abs_hx},
                         {"min_h", t.min_h}};
    }
    j["abort"] = ab;

    json verdicts = json::object();
    for (const auto& [name, v] : art.energy.verdicts)
        verdicts[name] = {{"pass", v.pass}, {"measured", v.measured}, {"limit", v.limit}, {"note", v.note}};
    j["energy"] = {{"E0", h.E0},
                   {"E_final", h.series.empty() ? 0.0 : h.series.back().energy},
                   {"dissipation_integral", art.energy.dissipation_integral},
                   {"budget_residual", art.energy.budget_residual},
                   {"max_step_increase", art.energy.max_step_increase},
                   {"max_abs_drift", art.energy.max_abs_drift},
                   {"verdicts", verdicts}};

    const BoundsReport& b = art.bounds;
    j["bounds"] = {{"status", to_string(b.status)},
                   {"reason", b.reason},
                   {"h_min_bound", b.bounds.h_min},
                   {"h_max_bound", b.bounds.h_max},
                   {"u_max_bound", b.bounds.u_max},
                   {"min_h", b.min_h},
                   {"max_h", b.max_h},
                   {"max_abs_u", b.max_abs_u},
                   {"margin_h_min", b.margin_h_min},
                   {"margin_h_max", b.margin_h_max},
                   {"margin_u", b.margin_u}};

    j["oleinik"] = {{"form", art.oleinik.form},
                    {"fitted_C", art.oleinik.fitted_C},
                    {"C", opt(art.oleinik.C)},
                    {"violations", art.oleinik.violations}};

    json bl = {{"triggered", art.blowup.triggered.has_value()}};
    if (art.blowup.triggered)
        bl["t"] = art.blowup.triggered->t, bl["code"] = art.blowup.triggered->code;
    j["blowup"] = bl;

    if (art.phase_speed)
        j["phase_speed"] = {{"k", art.cfg.wavenumbers.front()},
                            {"measured", opt(art.phase_speed->speed)},
                            {"expected", dispersion_omega(art.cfg.wavenumbers.front(), art.cfg.params)
                                             / art.cfg.wavenumbers.front()},
                            {"status", art.phase_speed->status}};
    j["checks"] = checks_json(art.checks);
    return j;
}

json sweep_json(const SweepResult& res)
{
    json j;
    j["pass"] = res.pass();
    json runs = json::array();
    for (std::size_t i = 0; i < res.runs.size(); ++i)
    {
        const RunArtifact& r = res.runs[i];
        runs.push_back({{"name", r.cfg.name},
                        {"epsilon", r.cfg.params.epsilon},
                        {"mollifier_epsilon", r.cfg.mollifier_epsilon},
                        {"E0", r.initial.E0},
                        {"fitted_C", r.oleinik.fitted_C},
                        {"lp_box_norm", i < res.lp_norms.size() ? opt(res.lp_norms[i]) : json(nullptr)},
                        {"abort", to_string(r.history.abort.reason)},
                        {"pass", r.pass()}});
    }
    j["runs"] = runs;
    json table = json::array();
    for (const SweepPair& p : res.table)
        table.push_back({{"eps_a", p.eps_a}, {"eps_b", p.eps_b}, {"l2_h", opt(p.l2_h)}, {"l2_u", opt(p.l2_u)}});
    j["convergence"] = table;
    j["common_C"] = res.common_C;
    j["oleinik_ratio"] = res.oleinik_ratio;
    j["lp_ratio"] = res.lp_ratio;
    j["checks"] = checks_json(res.checks);
    return j;
}

void write_run(const std::filesystem::path& dir, const RunArtifact& art)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir / "snapshots");
    open_out(dir / "config.ini") << to_ini(art.cfg);
    const SimHistory& h = art.history;
    for (std::size_t k = 0; k < h.snapshots.size(); ++k)
    {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%05zu.csv", k);
        write_snapshot_csv(dir / "snapshots" / name, h.snapshots[k], h.params, h.grid);
    }
    write_series_csv(dir / "series.csv", h.series);
    open_out(dir / "summary.json") << dump_json(artifact_json(art)) << '\n';
}

void write_sweep(const std::filesystem::path& dir, const SweepResult& res)
{
    std::filesystem::create_directories(dir);
    for (const RunArtifact& r : res.runs)
        write_run(dir / r.cfg.name, r);
    open_out(dir / "sweep.json") << dump_json(sweep_json(res)) << '\n';
    std::ofstream out = open_out(dir / "convergence.csv");
    out << "eps_a,eps_b,l2_h,l2_u\n";
    for (const SweepPair& p : res.table)
        out << format_number(p.eps_a) << ',' << format_number(p.eps_b) << ','
            << (p.l2_h ? format_number(*p.l2_h) : "") << ',' << (p.l2_u ? format_number(*p.l2_u) : "") << '\n';
}

} // namespace sgn
