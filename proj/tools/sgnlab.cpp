// sgnlab: run, sweep and validate SGN scenarios from INI configs.
//
// Exit codes: 0 all enabled checks pass, 1 a check failed, 2 usage or
// configuration error.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "sgn/config.hpp"
#include "sgn/error.hpp"
#include "sgn/output.hpp"
#include "sgn/version.hpp"

namespace fs = std::filesystem;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;

fs::path default_out()
{
    if (const char* env = std::getenv("SGNLAB_OUT"); env && *env)
        return env;
    return "sgnlab_out";
}

void print_checks(const std::string& prefix, const std::vector<sgn::CheckLine>& checks)
{
    for (const auto& c : checks)
    {
        std::string tag = c.status == sgn::CheckStatus::pass   ? "PASS"
                          : c.status == sgn::CheckStatus::fail ? "FAIL"
                                                                : "SKIP";
        std::cout << tag << "  " << prefix << c.name << ": " << c.detail << "\n";
    }
}

int cmd_run(const std::string& config, const std::string& out, const std::vector<std::string>& overrides)
{
    const sgn::ScenarioConfig cfg = sgn::load_config(config, overrides);
    const fs::path root = out.empty() ? default_out() : fs::path(out);
    const auto runs = sgn::expand_wavenumbers(cfg);
    bool ok = true;
    for (const auto& c : runs)
    {
        const sgn::RunArtifact art = sgn::run_scenario(c);
        const fs::path dir = runs.size() == 1 ? root : root / c.name;
        sgn::write_run(dir, art);
        print_checks(runs.size() == 1 ? "" : c.name + " ", art.checks);
        ok = ok && art.pass();
    }
    std::cout << (ok ? "all checks passed" : "some checks failed") << " (output in " << root.string() << ")\n";
    return ok ? exit_ok : exit_check_failed;
}

int cmd_sweep(const std::string& config, const std::string& epsilons, const std::string& out,
              const std::vector<std::string>& overrides)
{
    const sgn::ScenarioConfig cfg = sgn::load_config(config, overrides);
    const std::vector<double> eps = sgn::parse_number_list(epsilons);
    const sgn::SweepResult res = sgn::epsilon_sweep(cfg, eps);
    const fs::path root = out.empty() ? default_out() : fs::path(out);
    sgn::write_sweep(root, res);
    for (const auto& r : res.runs)
        print_checks(r.cfg.name + " ", r.checks);
    for (const auto& p : res.table)
        std::cout << "eps " << p.eps_a << " -> " << p.eps_b << ": L2(h) "
                  << (p.l2_h ? sgn::format_number(*p.l2_h) : "missing") << ", L2(u) "
                  << (p.l2_u ? sgn::format_number(*p.l2_u) : "missing") << "\n";
    print_checks("sweep ", res.checks);
    std::cout << (res.pass() ? "all checks passed" : "some checks failed") << " (output in " << root.string()
              << ")\n";
    return res.pass() ? exit_ok : exit_check_failed;
}

int cmd_check(const std::string& config, const std::vector<std::string>& overrides)
{
    const sgn::ScenarioConfig cfg = sgn::load_config(config, overrides);
    for (const auto& c : sgn::expand_wavenumbers(cfg))
    {
        const sgn::FlowState s0 = sgn::build_initial(c);
        const sgn::InitialInfo info = sgn::initial_info(s0, c);
        std::cout << c.name << ": " << sgn::to_string(c.kind) << " on " << c.grid.n << " cells, E0 "
                  << sgn::format_number(info.E0) << ", E_max " << sgn::format_number(info.E_max)
                  << (info.bounds_apply ? " (bounds apply)" : " (bounds do not apply)") << "\n";
    }
    std::cout << "config ok\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Serre-Green-Naghdi solver with surface tension"};
    app.set_version_flag("--version", sgn::version_string());
    app.require_subcommand(1);

    std::string config, out, epsilons;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "simulate one scenario and write its artifacts");
    run->add_option("--config", config, "INI config file")->required();
    run->add_option("--out", out, "output directory (default $SGNLAB_OUT or ./sgnlab_out)");
    run->add_option("--override", overrides, "section.key=value, repeatable");

    auto* sweep = app.add_subcommand("sweep", "run an epsilon sweep and compare successive runs");
    sweep->add_option("--config", config, "INI config file")->required();
    sweep->add_option("--epsilons", epsilons, "strictly decreasing list, e.g. 0.2,0.1,0.05")->required();
    sweep->add_option("--out", out, "output directory")->required();
    sweep->add_option("--override", overrides, "section.key=value, repeatable");

    auto* check = app.add_subcommand("check", "validate a config without running it");
    check->add_option("--config", config, "INI config file")->required();
    check->add_option("--override", overrides, "section.key=value, repeatable");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*run)
            return cmd_run(config, out, overrides);
        if (*sweep)
            return cmd_sweep(config, epsilons, out, overrides);
        return cmd_check(config, overrides);
    }
    catch (const sgn::Error& e)
    {
        std::cerr << "sgnlab: " << e.what() << "\n";
        return e.kind() == sgn::ErrorKind::config ? exit_usage : exit_check_failed;
    }
    catch (const std::exception& e)
    {
        std::cerr << "sgnlab: " << e.what() << "\n";
        return exit_check_failed;
    }
}
