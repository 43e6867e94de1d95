#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgn/config.hpp"
#include "sgn/diagnostics.hpp"
#include "sgn/dynamics.hpp"
#include "sgn/elliptic.hpp"
#include "sgn/error.hpp"
#include "sgn/output.hpp"
#include "sgn/scenario.hpp"
#include "sgn/version.hpp"

namespace py = pybind11;
using namespace sgn;

namespace
{

// JSON goes through the 17-digit dumper and is decoded on the Python side
py::object to_py(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(dump_json(j, -1));
}

} // namespace

PYBIND11_MODULE(_sgnlab, m)
{
    m.doc() = "Regularized shallow-water solver with surface tension";
    m.attr("__version__") = version_string();

    static py::exception<Error> sgn_error(m, "SgnError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const Error& e)
        {
            PyErr_SetString(sgn_error.ptr(), e.what());
        }
    });

    py::enum_<Mode>(m, "Mode").value("periodic", Mode::periodic).value("line", Mode::line);

    py::class_<Params>(m, "Params")
        .def(py::init<>())
        .def(py::init([](double g, double gamma, double hbar, double epsilon) {
                 Params p{g, gamma, hbar, epsilon};
                 p.validate();
                 return p;
             }),
             py::arg("g") = 9.81, py::arg("gamma") = 9.81, py::arg("hbar") = 1.0, py::arg("epsilon") = 0.0)
        .def_readwrite("g", &Params::g)
        .def_readwrite("gamma", &Params::gamma)
        .def_readwrite("hbar", &Params::hbar)
        .def_readwrite("epsilon", &Params::epsilon)
        .def("validate", &Params::validate)
        .def("energy_threshold", &Params::energy_threshold);

    py::class_<Grid>(m, "Grid")
        .def(py::init(&Grid::make), py::arg("n"), py::arg("x_left"), py::arg("x_right"),
             py::arg("mode") = Mode::periodic)
        .def_readonly("n", &Grid::n)
        .def_readonly("dx", &Grid::dx)
        .def_readonly("mode", &Grid::mode)
        .def("coordinates", &Grid::coordinates);

    py::class_<FlowState>(m, "FlowState")
        .def(py::init([](Field h, Field u, double t) { return FlowState{std::move(h), std::move(u), t}; }),
             py::arg("h"), py::arg("u"), py::arg("t") = 0.0)
        .def_readwrite("h", &FlowState::h)
        .def_readwrite("u", &FlowState::u)
        .def_readwrite("t", &FlowState::t);

    py::class_<Bounds>(m, "Bounds")
        .def_readonly("h_min", &Bounds::h_min)
        .def_readonly("h_max", &Bounds::h_max)
        .def_readonly("u_min", &Bounds::u_min)
        .def_readonly("u_max", &Bounds::u_max);

    m.def("total_energy", &total_energy, py::arg("state"), py::arg("params"), py::arg("grid"));
    m.def("total_mass", &total_mass, py::arg("state"), py::arg("grid"));
    m.def("a_priori_bounds", &a_priori_bounds, py::arg("E0"), py::arg("params"));
    m.def("dispersion_omega", &dispersion_omega, py::arg("k"), py::arg("params"));
    m.def("bond_number", &bond_number, py::arg("params"));
    m.def("derivative", [](const Field& f, const Grid& g) { return derivative(f, g); });
    m.def("solve_helmholtz", [](const Field& r, const Params& p, const Grid& g) { return solve_helmholtz(r, p, g); });
    m.def(
        "rk4_step", [](const FlowState& s, double dt, const Params& p, const Grid& g) { return rk4_step(s, dt, p, g).state; },
        py::arg("state"), py::arg("dt"), py::arg("params"), py::arg("grid"));

    m.def(
        "run",
        [](const std::string& text, const std::vector<std::string>& overrides) {
            const ScenarioConfig cfg = parse_config(text, overrides);
            RunArtifact art;
            {
                py::gil_scoped_release release;
                art = run_scenario(cfg);
            }
            return to_py(artifact_json(art));
        },
        py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{},
        "Run a scenario given as INI text; returns the summary as a dict.");

    m.def(
        "sweep",
        [](const std::string& text, const std::vector<double>& eps, const std::vector<std::string>& overrides) {
            const ScenarioConfig cfg = parse_config(text, overrides);
            SweepResult res;
            {
                py::gil_scoped_release release;
                res = epsilon_sweep(cfg, eps);
            }
            return to_py(sweep_json(res));
        },
        py::arg("config_text"), py::arg("epsilons"), py::arg("overrides") = std::vector<std::string>{});

    m.def(
        "normalize_config", [](const std::string& text) { return to_ini(parse_config(text)); },
        "Parse INI text and render it back with every key filled in.");
}
