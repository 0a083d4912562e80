#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kerrflux/config.hpp"
#include "kerrflux/effective.hpp"
#include "kerrflux/observables.hpp"
#include "kerrflux/sweep.hpp"

namespace py = pybind11;
using namespace kerrflux;

namespace {

struct PointSolution {
    SteadyState state;
    ObservableSet observables;
};

PointSolution solve_network(const NetworkModel& net) {
    const FockBasis basis = build_basis(static_cast<int>(net.modes.size()), net.truncation);
    const SteadyState ss = steady_state(build_liouvillian(build_hamiltonian(net, basis), net, basis));
    ObservableSet set = observable_set(ss, net, basis);
    return {ss, std::move(set)};
}

py::dict amplitudes_dict(const AmplitudeSolution& solution) {
    py::dict out;
    for (const auto& [occ, amp] : solution.amplitudes) {
        out[py::tuple(py::cast(occ))] = amp;
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "steady-state transmission and photon statistics of driven dissipative "
              "Kerr mode networks with synthetic flux";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<TruncationPolicy>(m, "TruncationPolicy")
        .def(py::init<>())
        .def(py::init([](std::vector<int> caps, std::optional<int> total) {
                 return TruncationPolicy{std::move(caps), total};
             }),
             py::arg("per_mode_caps"), py::arg("total_cap") = std::nullopt)
        .def_readwrite("per_mode_caps", &TruncationPolicy::per_mode_caps)
        .def_readwrite("total_cap", &TruncationPolicy::total_cap)
        .def("__eq__", [](const TruncationPolicy& a, const TruncationPolicy& b) { return a == b; });

    py::class_<ModeSpec>(m, "ModeSpec")
        .def(py::init([](std::string label, double omega, double kerr, double gamma) {
                 return ModeSpec{std::move(label), omega, kerr, gamma};
             }),
             py::arg("label"), py::arg("omega") = 0.0, py::arg("kerr") = 0.0,
             py::arg("gamma") = 1.0)
        .def_readwrite("label", &ModeSpec::label)
        .def_readwrite("omega", &ModeSpec::omega)
        .def_readwrite("kerr", &ModeSpec::kerr_u)
        .def_readwrite("gamma", &ModeSpec::gamma);

    py::class_<CouplingSpec>(m, "CouplingSpec")
        .def(py::init([](std::string from, std::string to, double g, double phase) {
                 return CouplingSpec{std::move(from), std::move(to), g, phase};
             }),
             py::arg("from_mode"), py::arg("to_mode"), py::arg("g"), py::arg("phase") = 0.0)
        .def_readwrite("from_mode", &CouplingSpec::from_mode)
        .def_readwrite("to_mode", &CouplingSpec::to_mode)
        .def_readwrite("g", &CouplingSpec::strength)
        .def_readwrite("phase", &CouplingSpec::phase);

    py::class_<DriveSpec>(m, "DriveSpec")
        .def(py::init([](std::string target, double epsilon, double detuning) {
                 return DriveSpec{std::move(target), epsilon, detuning};
             }),
             py::arg("target"), py::arg("epsilon"), py::arg("detuning") = 0.0)
        .def_readwrite("target", &DriveSpec::target_mode)
        .def_readwrite("epsilon", &DriveSpec::epsilon)
        .def_readwrite("detuning", &DriveSpec::detuning);

    py::class_<NetworkModel>(m, "NetworkModel")
        .def(py::init<>())
        .def_readwrite("modes", &NetworkModel::modes)
        .def_readwrite("couplings", &NetworkModel::couplings)
        .def_readwrite("drive", &NetworkModel::drive)
        .def_readwrite("truncation", &NetworkModel::truncation)
        .def("validate", &NetworkModel::validate)
        .def("__eq__", [](const NetworkModel& a, const NetworkModel& b) { return a == b; });

    py::enum_<SweepVariable>(m, "SweepVariable")
        .value("detuning", SweepVariable::detuning)
        .value("phase", SweepVariable::phase);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init([](SweepVariable variable, double start, double stop, int points,
                         std::vector<std::string> drive_ports) {
                 return SweepSpec{variable, start, stop, points, std::move(drive_ports)};
             }),
             py::arg("variable") = SweepVariable::detuning, py::arg("start") = -10.0,
             py::arg("stop") = 10.0, py::arg("points") = 401,
             py::arg("drive_ports") = std::vector<std::string>{})
        .def_readwrite("variable", &SweepSpec::variable)
        .def_readwrite("start", &SweepSpec::start)
        .def_readwrite("stop", &SweepSpec::stop)
        .def_readwrite("points", &SweepSpec::points)
        .def_readwrite("drive_ports", &SweepSpec::drive_ports)
        .def("grid", &SweepSpec::grid)
        .def("__eq__", [](const SweepSpec& a, const SweepSpec& b) { return a == b; });

    py::class_<PortPair>(m, "PortPair")
        .def(py::init([](std::string input, std::string output) {
                 return PortPair{std::move(input), std::move(output)};
             }),
             py::arg("input_mode"), py::arg("output_mode"))
        .def_readonly("input_mode", &PortPair::input_mode)
        .def_readonly("output_mode", &PortPair::output_mode);

    py::class_<ObservableSet>(m, "ObservableSet")
        .def_readonly("input_mode", &ObservableSet::input_mode)
        .def_readonly("epsilon", &ObservableSet::epsilon)
        .def_readonly("detuning", &ObservableSet::detuning)
        .def_readonly("residual", &ObservableSet::residual)
        .def_readonly("mean_photon", &ObservableSet::mean_photon)
        .def_readonly("pair_moment", &ObservableSet::pair_moment)
        .def_readonly("transmission", &ObservableSet::transmission)
        .def_readonly("g2", &ObservableSet::g2);

    py::class_<PairObservables>(m, "PairObservables")
        .def_readonly("transmission", &PairObservables::transmission)
        .def_readonly("g2", &PairObservables::g2)
        .def_readonly("mean_photon_out", &PairObservables::mean_photon_out)
        .def_readonly("residual", &PairObservables::residual)
        .def_readonly("solved", &PairObservables::solved)
        .def_readonly("error", &PairObservables::error);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("variable", &SweepResult::variable)
        .def_readonly("grid", &SweepResult::grid)
        .def_readonly("pairs", &SweepResult::pairs)
        .def("all_solved", &SweepResult::all_solved)
        .def("cell",
             [](const SweepResult& r, std::size_t g, std::size_t p) { return r.rows.at(g).at(p); })
        .def("column",
             [](const SweepResult& r, const std::string& field, const std::string& in,
                const std::string& out) {
                 std::size_t pair = r.pairs.size();
                 for (std::size_t p = 0; p < r.pairs.size(); ++p) {
                     if (r.pairs[p].input_mode == in && r.pairs[p].output_mode == out) pair = p;
                 }
                 if (pair == r.pairs.size()) {
                     throw UsageError("no pair " + in + "->" + out + " in this sweep");
                 }
                 std::vector<double> column;
                 column.reserve(r.rows.size());
                 for (const auto& row : r.rows) {
                     const PairObservables& cell = row[pair];
                     if (field == "T") column.push_back(cell.transmission);
                     else if (field == "g2") column.push_back(cell.g2);
                     else if (field == "n") column.push_back(cell.mean_photon_out);
                     else if (field == "residual") column.push_back(cell.residual);
                     else throw UsageError("unknown column '" + field + "'");
                 }
                 return column;
             },
             py::arg("field"), py::arg("input_mode"), py::arg("output_mode"))
        .def("to_csv", [](const SweepResult& r) { return to_csv(r); });

    py::class_<EffectiveModel>(m, "EffectiveModel")
        .def_readonly("j_forward", &EffectiveModel::j_forward)
        .def_readonly("j_backward", &EffectiveModel::j_backward)
        .def_readonly("j_induced", &EffectiveModel::j_induced)
        .def_readonly("direct_hopping", &EffectiveModel::direct_hopping)
        .def_readonly("flux", &EffectiveModel::flux)
        .def_readonly("gamma_a_induced", &EffectiveModel::gamma_a_induced)
        .def_readonly("gamma_b_induced", &EffectiveModel::gamma_b_induced)
        .def_readonly("base", &EffectiveModel::base)
        .def_readonly("mode_a", &EffectiveModel::mode_a)
        .def_readonly("mode_b", &EffectiveModel::mode_b)
        .def_readonly("eliminated_mode", &EffectiveModel::eliminated_mode);

    py::class_<AmplitudeSolution>(m, "AmplitudeSolution")
        .def_readonly("mode_labels", &AmplitudeSolution::mode_labels)
        .def_readonly("drive_order", &AmplitudeSolution::drive_order)
        .def_readonly("epsilon", &AmplitudeSolution::epsilon)
        .def_readonly("warnings", &AmplitudeSolution::warnings)
        .def("mean_photon", &AmplitudeSolution::mean_photon, py::arg("mode"))
        .def("pair_moment", &AmplitudeSolution::pair_moment, py::arg("mode"))
        .def_property_readonly("amplitudes", &amplitudes_dict);

    m.def("preset", &preset, py::arg("name"));
    m.def("preset_names", [] { return preset_names(); });
    m.def("preset_sweep", &preset_sweep, py::arg("name"));
    m.def("gauge_canonicalize", &gauge_canonicalize, py::arg("network"));
    m.def("validate_timescales", &validate_timescales, py::arg("network"));
    m.def("kerr_from_material", &kerr_from_material, py::arg("omega"), py::arg("n2"),
          py::arg("n_linear"), py::arg("v_eff"));

    m.def("build_hamiltonian",
          [](const NetworkModel& net) {
              const FockBasis basis =
                  build_basis(static_cast<int>(net.modes.size()), net.truncation);
              return DenseMatrix(build_hamiltonian(net, basis));
          },
          py::arg("network"), "dense Hamiltonian on the network's truncated basis");

    m.def("basis_states",
          [](const NetworkModel& net) {
              const FockBasis basis =
                  build_basis(static_cast<int>(net.modes.size()), net.truncation);
              return basis.states();
          },
          py::arg("network"));

    m.def("steady_state",
          [](const NetworkModel& net) {
              const PointSolution solution = solve_network(net);
              return py::make_tuple(DenseMatrix(solution.state.rho), solution.state.residual);
          },
          py::arg("network"), "density matrix and solver residual at one scan point");

    m.def("solve_observables",
          [](const NetworkModel& net) { return solve_network(net).observables; },
          py::arg("network"));

    m.def("evolve",
          [](const NetworkModel& net, const DenseMatrix& rho0, double t_final, double dt) {
              const FockBasis basis =
                  build_basis(static_cast<int>(net.modes.size()), net.truncation);
              const Liouvillian liouvillian =
                  build_liouvillian(build_hamiltonian(net, basis), net, basis);
              return evolve(liouvillian, rho0, t_final, dt);
          },
          py::arg("network"), py::arg("rho0"), py::arg("t_final"), py::arg("dt"));

    m.def("amplitude_oracle", &amplitude_oracle, py::arg("network"));
    m.def("adiabatic_eliminate", &adiabatic_eliminate, py::arg("network"));

    m.def("effective_observables",
          [](const EffectiveModel& eff, const std::vector<double>& grid) {
              const FockBasis basis = build_basis(2, eff.base.truncation);
              return effective_observables(eff, basis, grid);
          },
          py::arg("effective"), py::arg("detuning_grid"));

    m.def("run_sweep", &run_sweep, py::arg("network"), py::arg("sweep"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());

    m.def("parse_config",
          [](const std::string& text) {
              const ParsedConfig parsed = parse_config(text);
              return py::make_tuple(parsed.model, parsed.sweep, parsed.notes);
          },
          py::arg("text"));
    m.def("serialize_config", &serialize_config, py::arg("network"), py::arg("sweep"));
}
