#include "sgn/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sgn/error.hpp"

namespace sgn
{

namespace pt = boost::property_tree;

namespace
{

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"params", {"g", "gamma", "hbar", "epsilon"}},
        {"grid", {"n", "x_left", "x_right", "mode"}},
        {"scenario",
         {"name", "kind", "amplitude", "width", "center", "wavenumber", "wavenumbers", "half_length", "sign",
          "file", "mollifier_epsilon", "target_energy", "expect_blowup", "sweep_mollifier"}},
        {"step", {"cfl", "dt_max", "t_end", "output_every", "max_steps"}},
        {"checks",
         {"energy", "conservation_rel", "monotone_slack_rel", "budget_rel", "budget_floor_rel", "bounds",
          "bounds_tol", "oleinik", "oleinik_C", "phase_speed", "phase_tol", "blowup", "blowup_ux",
          "blowup_hx", "blowup_h_fraction", "far_field_tol", "box_t1", "box_t2", "box_a", "box_b",
          "lp_alpha", "lp_ratio_max", "oleinik_ratio_max"}},
    };
    return keys;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try
    {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty())
            return d;
    }
    catch (const std::exception&)
    {
    }
    throw Error(ErrorKind::config, key + ": expected a number, got '" + v + "'");
}

long to_long(const std::string& key, const std::string& v)
{
    try
    {
        std::size_t used = 0;
        const long d = std::stol(v, &used);
        if (trim(v.substr(used)).empty())
            return d;
    }
    catch (const std::exception&)
    {
    }
    throw Error(ErrorKind::config, key + ": expected an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "yes" || v == "on" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "off" || v == "0")
        return false;
    throw Error(ErrorKind::config, key + ": expected true or false, got '" + v + "'");
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<double> parse_number_list(const std::string& s)
{
    std::string t = s;
    for (char& c : t)
        if (c == ',' || c == ';')
            c = ' ';
    std::istringstream in(t);
    std::vector<double> out;
    for (std::string tok; in >> tok;)
        out.push_back(to_double("list", tok));
    return out;
}

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides)
{
    pt::ptree tree;
    try
    {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw Error(ErrorKind::config, std::string("malformed config: ") + e.what());
    }

    for (const std::string& ov : overrides)
    {
        const auto eq = ov.find('=');
        const auto dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw Error(ErrorKind::config, "override '" + ov + "' is not section.key=value");
        tree.put(pt::ptree::path_type(trim(ov.substr(0, eq)), '.'), trim(ov.substr(eq + 1)));
    }

    std::map<std::string, std::map<std::string, std::string>> kv;
    for (const auto& [section, body] : tree)
    {
        if (!body.data().empty() && body.empty())
            throw Error(ErrorKind::config, "key '" + section + "' outside a section");
        const auto it = known_keys().find(section);
        if (it == known_keys().end())
            throw Error(ErrorKind::config, "unknown section [" + section + "]");
        for (const auto& [key, value] : body)
        {
            if (!it->second.count(key))
                throw Error(ErrorKind::config, "unknown key " + section + "." + key);
            kv[section][key] = trim(value.data());
        }
    }

    auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
        const auto s = kv.find(sec);
        if (s == kv.end())
            return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    auto real = [&](const std::string& sec, const std::string& key, double& dst) {
        if (const std::string* v = get(sec, key))
            dst = to_double(sec + "." + key, *v);
    };
    auto flag = [&](const std::string& sec, const std::string& key, bool& dst) {
        if (const std::string* v = get(sec, key))
            dst = to_bool(sec + "." + key, *v);
    };
    auto opt_real = [&](const std::string& sec, const std::string& key, std::optional<double>& dst) {
        if (const std::string* v = get(sec, key))
        {
            if (v->empty() || *v == "none")
                dst.reset();
            else
                dst = to_double(sec + "." + key, *v);
        }
    };

    ScenarioConfig cfg;

    real("params", "g", cfg.params.g);
    real("params", "gamma", cfg.params.gamma);
    real("params", "hbar", cfg.params.hbar);
    real("params", "epsilon", cfg.params.epsilon);

    long n = cfg.grid.n;
    double xl = cfg.grid.x_left, xr = cfg.grid.x_right();
    Mode mode = cfg.grid.mode;
    if (const std::string* v = get("grid", "n"))
        n = to_long("grid.n", *v);
    real("grid", "x_left", xl);
    real("grid", "x_right", xr);
    if (const std::string* v = get("grid", "mode"))
    {
        if (*v == "periodic")
            mode = Mode::periodic;
        else if (*v == "line")
            mode = Mode::line;
        else
            throw Error(ErrorKind::config, "grid.mode must be periodic or line, got '" + *v + "'");
    }
    try
    {
        cfg.grid = Grid::make(static_cast<int>(n), xl, xr, mode);
    }
    catch (const Error& e)
    {
        throw Error(ErrorKind::config, std::string("grid: ") + e.what());
    }

    if (const std::string* v = get("scenario", "name"))
        cfg.name = *v;
    if (const std::string* v = get("scenario", "kind"))
        cfg.kind = scenario_kind_from_string(*v);
    real("scenario", "amplitude", cfg.amplitude);
    real("scenario", "width", cfg.width);
    real("scenario", "center", cfg.center);
    if (const std::string* v = get("scenario", "wavenumber"))
        cfg.wavenumbers = {to_double("scenario.wavenumber", *v)};
    if (const std::string* v = get("scenario", "wavenumbers"))
        cfg.wavenumbers = parse_number_list(*v);
    real("scenario", "half_length", cfg.half_length);
    real("scenario", "sign", cfg.sign);
    if (const std::string* v = get("scenario", "file"))
        cfg.file = *v;
    real("scenario", "mollifier_epsilon", cfg.mollifier_epsilon);
    opt_real("scenario", "target_energy", cfg.target_energy);
    flag("scenario", "expect_blowup", cfg.expect_blowup);
    opt_real("scenario", "sweep_mollifier", cfg.sweep_mollifier);

    real("step", "cfl", cfg.step.cfl);
    real("step", "dt_max", cfg.step.dt_max);
    real("step", "t_end", cfg.step.t_end);
    if (const std::string* v = get("step", "output_every"))
        cfg.step.output_every = static_cast<int>(to_long("step.output_every", *v));
    if (const std::string* v = get("step", "max_steps"))
        cfg.step.max_steps = to_long("step.max_steps", *v);

    CheckConfig& ch = cfg.checks;
    flag("checks", "energy", ch.energy);
    real("checks", "conservation_rel", ch.energy_tol.conservation_rel);
    real("checks", "monotone_slack_rel", ch.energy_tol.monotone_slack_rel);
    real("checks", "budget_rel", ch.energy_tol.budget_rel);
    real("checks", "budget_floor_rel", ch.energy_tol.budget_floor_rel);
    if (const std::string* v = get("checks", "bounds"))
        ch.bounds = *v == "auto" ? Toggle::automatic : (to_bool("checks.bounds", *v) ? Toggle::on : Toggle::off);
    real("checks", "bounds_tol", ch.bounds_tol);
    flag("checks", "oleinik", ch.oleinik);
    opt_real("checks", "oleinik_C", ch.oleinik_C);
    flag("checks", "phase_speed", ch.phase_speed);
    real("checks", "phase_tol", ch.phase_tol);
    flag("checks", "blowup", cfg.monitors.blowup);
    real("checks", "blowup_ux", cfg.monitors.thresholds.ux);
    real("checks", "blowup_hx", cfg.monitors.thresholds.hx);
    real("checks", "blowup_h_fraction", cfg.monitors.thresholds.h_fraction);
    real("checks", "far_field_tol", cfg.monitors.far_field_tol);

    const char* box_keys[] = {"box_t1", "box_t2", "box_a", "box_b"};
    int box_count = 0;
    for (const char* k : box_keys)
        box_count += get("checks", k) != nullptr;
    if (box_count == 4)
    {
        Box b;
        real("checks", "box_t1", b.t1);
        real("checks", "box_t2", b.t2);
        real("checks", "box_a", b.a);
        real("checks", "box_b", b.b);
        ch.box = b;
    }
    else if (box_count != 0)
    {
        throw Error(ErrorKind::config, "checks.box_t1, box_t2, box_a and box_b must be given together");
    }
    real("checks", "lp_alpha", ch.lp_alpha);
    real("checks", "lp_ratio_max", ch.lp_ratio_max);
    real("checks", "oleinik_ratio_max", ch.oleinik_ratio_max);

    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::config, "cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::string to_ini(const ScenarioConfig& cfg)
{
    std::ostringstream o;
    auto b = [](bool v) { return v ? "true" : "false"; };

    o << "[params]\n";
    o << "g = " << num(cfg.params.g) << "\n";
    o << "gamma = " << num(cfg.params.gamma) << "\n";
    o << "hbar = " << num(cfg.params.hbar) << "\n";
    o << "epsilon = " << num(cfg.params.epsilon) << "\n";

    o << "\n[grid]\n";
    o << "n = " << cfg.grid.n << "\n";
    o << "x_left = " << num(cfg.grid.x_left) << "\n";
    o << "x_right = " << num(cfg.grid.x_right()) << "\n";
    o << "mode = " << (cfg.grid.mode == Mode::periodic ? "periodic" : "line") << "\n";

    o << "\n[scenario]\n";
    o << "name = " << cfg.name << "\n";
    o << "kind = " << to_string(cfg.kind) << "\n";
    o << "amplitude = " << num(cfg.amplitude) << "\n";
    o << "width = " << num(cfg.width) << "\n";
    o << "center = " << num(cfg.center) << "\n";
    o << "wavenumbers =";
    for (double k : cfg.wavenumbers)
        o << " " << num(k);
    o << "\n";
    o << "half_length = " << num(cfg.half_length) << "\n";
    o << "sign = " << num(cfg.sign) << "\n";
    if (!cfg.file.empty())
        o << "file = " << cfg.file << "\n";
    o << "mollifier_epsilon = " << num(cfg.mollifier_epsilon) << "\n";
    if (cfg.target_energy)
        o << "target_energy = " << num(*cfg.target_energy) << "\n";
    o << "expect_blowup = " << b(cfg.expect_blowup) << "\n";
    if (cfg.sweep_mollifier)
        o << "sweep_mollifier = " << num(*cfg.sweep_mollifier) << "\n";

    o << "\n[step]\n";
    o << "cfl = " << num(cfg.step.cfl) << "\n";
    o << "dt_max = " << num(cfg.step.dt_max) << "\n";
    o << "t_end = " << num(cfg.step.t_end) << "\n";
    o << "output_every = " << cfg.step.output_every << "\n";
    o << "max_steps = " << cfg.step.max_steps << "\n";

    const CheckConfig& ch = cfg.checks;
    o << "\n[checks]\n";
    o << "energy = " << b(ch.energy) << "\n";
    o << "conservation_rel = " << num(ch.energy_tol.conservation_rel) << "\n";
    o << "monotone_slack_rel = " << num(ch.energy_tol.monotone_slack_rel) << "\n";
    o << "budget_rel = " << num(ch.energy_tol.budget_rel) << "\n";
    o << "budget_floor_rel = " << num(ch.energy_tol.budget_floor_rel) << "\n";
    o << "bounds = " << (ch.bounds == Toggle::automatic ? "auto" : b(ch.bounds == Toggle::on)) << "\n";
    o << "bounds_tol = " << num(ch.bounds_tol) << "\n";
    o << "oleinik = " << b(ch.oleinik) << "\n";
    if (ch.oleinik_C)
        o << "oleinik_C = " << num(*ch.oleinik_C) << "\n";
    o << "phase_speed = " << b(ch.phase_speed) << "\n";
    o << "phase_tol = " << num(ch.phase_tol) << "\n";
    o << "blowup = " << b(cfg.monitors.blowup) << "\n";
    o << "blowup_ux = " << num(cfg.monitors.thresholds.ux) << "\n";
    o << "blowup_hx = " << num(cfg.monitors.thresholds.hx) << "\n";
    o << "blowup_h_fraction = " << num(cfg.monitors.thresholds.h_fraction) << "\n";
    o << "far_field_tol = " << num(cfg.monitors.far_field_tol) << "\n";
    if (ch.box)
    {
        o << "box_t1 = " << num(ch.box->t1) << "\n";
        o << "box_t2 = " << num(ch.box->t2) << "\n";
        o << "box_a = " << num(ch.box->a) << "\n";
        o << "box_b = " << num(ch.box->b) << "\n";
    }
    o << "lp_alpha = " << num(ch.lp_alpha) << "\n";
    o << "lp_ratio_max = " << num(ch.lp_ratio_max) << "\n";
    o << "oleinik_ratio_max = " << num(ch.oleinik_ratio_max) << "\n";
    return o.str();
}

} // namespace sgn
