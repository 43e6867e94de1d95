#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "sgn/config.hpp"
#include "sgn/error.hpp"
#include "sgn/output.hpp"

using namespace sgn;
namespace fs = std::filesystem;

namespace
{

const char* base_cfg = R"(
[params]
g = 9.81
gamma = 2.5
hbar = 1

[grid]
n = 128
x_left = -10
x_right = 10
mode = periodic

[scenario]
name = unit
kind = gaussian
amplitude = 0.03
width = 1.5

[step]
cfl = 0.4
t_end = 0.2
output_every = 5

[checks]
energy = true
bounds = auto
)";

ErrorKind kind_of(const std::function<void()>& f)
{
    try
    {
        f();
    }
    catch (const Error& e)
    {
        return e.kind();
    }
    FAIL("expected an exception");
    return ErrorKind::contract;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("sgn_test_" + name);
    fs::remove_all(d);
    return d;
}

} // namespace

TEST_CASE("parse a configuration")
{
    const ScenarioConfig c = parse_config(base_cfg);
    CHECK(c.name == "unit");
    CHECK(c.kind == ScenarioKind::gaussian);
    CHECK(c.params.gamma == 2.5);
    CHECK(c.grid.n == 128);
    CHECK(c.grid.mode == Mode::periodic);
    CHECK(c.step.output_every == 5);
    CHECK(c.checks.bounds == Toggle::automatic);
}

TEST_CASE("overrides")
{
    const ScenarioConfig c = parse_config(base_cfg, {"grid.n=256", "params.epsilon=0", "checks.bounds=false"});
    CHECK(c.grid.n == 256);
    CHECK(c.checks.bounds == Toggle::off);
    CHECK(kind_of([] { parse_config(base_cfg, {"grid.n"}); }) == ErrorKind::config);
    CHECK(kind_of([] { parse_config(base_cfg, {"grid.cells=3"}); }) == ErrorKind::config);
}

TEST_CASE("malformed configurations are config errors")
{
    CHECK(kind_of([] { parse_config(std::string(base_cfg) + "[extra]\nk = 1\n"); }) == ErrorKind::config);
    CHECK(kind_of([] { parse_config(std::string(base_cfg) + "[step]\nspeed = 1\n"); }) == ErrorKind::config);
    CHECK(kind_of([] { parse_config("n = 3\n" + std::string(base_cfg)); }) == ErrorKind::config);
    CHECK(kind_of([] { parse_config(base_cfg, {"grid.n=abc"}); }) == ErrorKind::config);
    CHECK(kind_of([] { parse_config(base_cfg, {"grid.mode=torus"}); }) == ErrorKind::config);
    CHECK(kind_of([] { parse_config(base_cfg, {"scenario.kind=sine", "grid.mode=line"}); }) == ErrorKind::config);
    CHECK(kind_of([] { parse_config(base_cfg, {"checks.box_t1=0.1"}); }) == ErrorKind::config);
    CHECK(kind_of([] { load_config("/nonexistent/file.cfg"); }) == ErrorKind::config);
}

TEST_CASE("config echo round-trips for every shipped configuration")
{
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(SGN_CONFIG_DIR))
        if (e.path().extension() == ".cfg")
            files.push_back(e.path());
    REQUIRE(files.size() >= 5);
    for (const fs::path& f : files)
    {
        CAPTURE(f.string());
        const ScenarioConfig c = load_config(f.string());
        const std::string echo = to_ini(c);
        const ScenarioConfig back = parse_config(echo);
        CHECK(to_ini(back) == echo);
        CHECK(back.grid.dx == c.grid.dx);
        CHECK(back.grid.x_right() == c.grid.x_right());
        CHECK(back.params.gamma == c.params.gamma);
        CHECK(back.wavenumbers == c.wavenumbers);
    }
}

TEST_CASE("number lists")
{
    CHECK(parse_number_list("0.2,0.1 0.05") == std::vector<double>{0.2, 0.1, 0.05});
    CHECK(parse_number_list(" 1 ,2 ") == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(parse_number_list("0.1,x"), Error);
}

TEST_CASE("17 significant digits")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(std::nan("")) == "nan");
    const double third = 1.0 / 3.0;
    CHECK(std::stod(format_number(third)) == third);

    nlohmann::json j;
    j["a"] = 0.1;
    j["b"] = {1.0 / 3.0, 2};
    j["c"] = std::numeric_limits<double>::infinity();
    j["s"] = "text";
    const std::string txt = dump_json(j, 0);
    CHECK(txt.find("0.10000000000000001") != std::string::npos);
    CHECK(txt.find("0.33333333333333331") != std::string::npos);
    CHECK(txt.find("\"c\":null") != std::string::npos);
    const nlohmann::json back = nlohmann::json::parse(dump_json(j));
    CHECK(back["a"].get<double>() == 0.1);
    CHECK(back["b"][0].get<double>() == 1.0 / 3.0);
}

TEST_CASE("artifacts are complete and deterministic")
{
    const ScenarioConfig c = parse_config(base_cfg);
    const fs::path d1 = scratch("det1"), d2 = scratch("det2");
    write_run(d1, run_scenario(c));
    write_run(d2, run_scenario(c));
    CHECK(fs::exists(d1 / "summary.json"));
    CHECK(fs::exists(d1 / "config.ini"));
    const std::string series = slurp(d1 / "series.csv");
    CHECK(series.rfind("t,mass,energy,min_h,min_ux,max_abs_hx,sup_P,sup_Q", 0) == 0);
    CHECK(series == slurp(d2 / "series.csv"));
    int snaps = 0;
    for (const auto& e : fs::directory_iterator(d1 / "snapshots"))
    {
        CHECK(slurp(e.path()) == slurp(d2 / "snapshots" / e.path().filename()));
        CHECK(slurp(e.path()).rfind("x,h,u,P,Q\n", 0) == 0);
        ++snaps;
    }
    CHECK(snaps >= 2);

    const auto summary = nlohmann::json::parse(slurp(d1 / "summary.json"));
    CHECK(summary["pass"].get<bool>());
    CHECK(summary["name"] == "unit");
    // the config echo reproduces the run
    const ScenarioConfig again = parse_config(summary["config"].get<std::string>());
    const fs::path d3 = scratch("det3");
    write_run(d3, run_scenario(again));
    CHECK(slurp(d3 / "series.csv") == series);
    for (const fs::path& d : {d1, d2, d3})
        fs::remove_all(d);
}

#ifdef SGNLAB_EXE
namespace
{

int sgnlab(const std::string& args, const std::string& env = "", const fs::path& capture = {})
{
    std::string cmd = env + " \"" SGNLAB_EXE "\" " + args;
    cmd += capture.empty() ? " > /dev/null 2>&1" : " > \"" + capture.string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

TEST_CASE("command-line exit codes")
{
    const std::string cfgdir = SGN_CONFIG_DIR;
    const fs::path out = scratch("cli");

    CHECK(sgnlab("run --config " + cfgdir + "/flat.cfg --out " + out.string()) == 0);
    CHECK(fs::exists(out / "series.csv"));

    const fs::path log = scratch("cli_log.txt");
    CHECK(sgnlab("run --config " + cfgdir + "/dispersion_b3.cfg --out " + (out / "b3").string(), "", log) == 0);
    const std::string text = slurp(log);
    std::istringstream in(text);
    int lines = 0;
    for (std::string line; std::getline(in, line);)
        lines += line.rfind("PASS", 0) == 0 && line.find("phase_speed") != std::string::npos;
    CHECK(lines == 3);

    CHECK(sgnlab("check --config " + cfgdir + "/steep_eps0.cfg") == 0);
    CHECK(sgnlab("check --config /nonexistent.cfg") == 2);
    CHECK(sgnlab("frobnicate") == 2);
    CHECK(sgnlab("run") == 2);
    CHECK(sgnlab("run --config " + cfgdir + "/flat.cfg --override grid.bogus=1") == 2);
    CHECK(sgnlab("run --config " + cfgdir + "/flat.cfg --out " + out.string()
                 + " --override scenario.kind=gaussian --override scenario.amplitude=0.05"
                 + " --override checks.conservation_rel=1e-300 --override checks.bounds=auto") == 1);

    const fs::path envout = scratch("cli_env");
    CHECK(sgnlab("run --config " + cfgdir + "/flat.cfg", "SGNLAB_OUT=" + envout.string()) == 0);
    CHECK(fs::exists(envout));
    for (const fs::path& d : {out, log, envout})
        fs::remove_all(d);
}
#endif
