#include "quditsim/config.hpp"
#include "quditsim/experiments.hpp"
#include "quditsim/runner.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace quditsim;
using nlohmann::json;

namespace {

ExperimentConfig config_from(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg = parse_config(doc);
  validate(cfg);
  return cfg;
}

json vqe_json(const std::vector<VqePoint>& pts) {
  json out = json::array();
  for (const VqePoint& p : pts) {
    out.push_back({{"G", p.G},
                   {"theta", p.theta},
                   {"energy", p.energy},
                   {"ansatz_energy", p.ansatz_energy},
                   {"exact_energy", p.exact_energy},
                   {"photons", p.photons},
                   {"atom_excitation", p.atom_excitation},
                   {"exact_photons", p.exact_photons},
                   {"exact_atom_excitation", p.exact_atom_excitation},
                   {"trace", p.trace},
                   {"evaluations", p.evaluations},
                   {"converged", p.converged},
                   {"sequence_ns", p.sequence_ns}});
  }
  return out;
}

json dqs_json(const DqsResult& r) {
  json runs = json::array();
  for (const DqsRun& run : r.runs) {
    json pts = json::array();
    for (const DqsPoint& p : run.points) {
      pts.push_back({{"t", p.t},
                     {"steps", p.steps},
                     {"pulses", p.pulses},
                     {"sequence_ns", p.sequence_ns},
                     {"photons", p.photons},
                     {"sigma_z", p.sigma_z},
                     {"leakage", p.leakage},
                     {"ideal_photons", p.ideal_photons},
                     {"ideal_sigma_z", p.ideal_sigma_z},
                     {"exact_photons", p.exact_photons},
                     {"exact_sigma_z", p.exact_sigma_z},
                     {"fidelity", p.fidelity},
                     {"max_trace_error", p.max_trace_error},
                     {"min_eigenvalue", p.min_eigenvalue}});
    }
    runs.push_back({{"t2_us", run.t2_us},
                    {"average_fidelity", run.average_fidelity},
                    {"max_sequence_ns", run.max_sequence_ns},
                    {"mean_sequence_ns", run.mean_sequence_ns},
                    {"points", pts}});
  }
  return runs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin-qudit simulator for the quantum Rabi model";

  auto base = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PhysicsError>(m, "PhysicsError", PyExc_RuntimeError);
  py::register_exception<SchedulingError>(m, "SchedulingError", PyExc_RuntimeError);
  (void)base;

  py::class_<HardwareSpec>(m, "HardwareSpec")
      .def(py::init<>())
      .def_readwrite("S1", &HardwareSpec::S1)
      .def_readwrite("s2", &HardwareSpec::s2)
      .def_readwrite("g1", &HardwareSpec::g1)
      .def_readwrite("g2", &HardwareSpec::g2)
      .def_readwrite("B", &HardwareSpec::B)
      .def_readwrite("D", &HardwareSpec::D)
      .def_readwrite("Dprime", &HardwareSpec::Dprime)
      .def_readwrite("Jx", &HardwareSpec::Jx)
      .def_readwrite("Jy", &HardwareSpec::Jy)
      .def_readwrite("Jz", &HardwareSpec::Jz)
      .def_readwrite("T2", &HardwareSpec::T2);

  py::class_<RabiSpec>(m, "RabiSpec")
      .def(py::init<>())
      .def(py::init([](double omega_a, double Omega, double G, int d) { return RabiSpec{omega_a, Omega, G, d}; }),
           py::arg("omega_a") = 0.5, py::arg("Omega") = 1.0, py::arg("G") = 0.0, py::arg("d") = 4)
      .def_readwrite("omega_a", &RabiSpec::omega_a)
      .def_readwrite("Omega", &RabiSpec::Omega)
      .def_readwrite("G", &RabiSpec::G)
      .def_readwrite("d", &RabiSpec::d);

  py::class_<ProductLabel>(m, "ProductLabel")
      .def_readonly("m1", &ProductLabel::m1)
      .def_readonly("m2", &ProductLabel::m2)
      .def("__repr__", [](const ProductLabel& l) {
        return "ProductLabel(m1=" + std::to_string(l.m1) + ", m2=" + std::to_string(l.m2) + ")";
      });

  py::class_<Transition>(m, "Transition")
      .def_readonly("lower", &Transition::from)
      .def_readonly("upper", &Transition::to)
      .def_readonly("from_level", &Transition::from_level)
      .def_readonly("to_level", &Transition::to_level)
      .def_readonly("frequency_ghz", &Transition::frequency_ghz)
      .def_readonly("matrix_element", &Transition::matrix_element)
      .def_readonly("qudit_line", &Transition::qudit_line);

  py::class_<SpinSystem>(m, "SpinSystem")
      .def(py::init<const HardwareSpec&>())
      .def_property_readonly("dim", &SpinSystem::dim)
      .def_property_readonly("energies", [](const SpinSystem& s) { return RealVector(s.energies()); })
      .def_property_readonly("eigenvectors", [](const SpinSystem& s) { return ComplexMatrix(s.eigenvectors()); })
      .def_property_readonly("min_overlap", [](const SpinSystem& s) { return s.levels().min_overlap; })
      .def_property_readonly("transitions", [](const SpinSystem& s) { return s.transitions().lines; })
      .def("label", &SpinSystem::label);

  m.def("hardware_hamiltonian", &build_hardware_hamiltonian, "Product-basis hardware Hamiltonian in GHz");

  m.def("rabi_hamiltonian", &rabi_hamiltonian);
  m.def(
      "exact_ground_state",
      [](const RabiSpec& s) {
        const GroundState g = exact_ground_state(s);
        return py::make_tuple(g.energy, ComplexVector(g.state));
      },
      "Lowest eigenpair (energy, state) of the truncated Rabi Hamiltonian");
  m.def(
      "exact_dynamics",
      [](const RabiSpec& s, const std::vector<double>& times) {
        const ExactPropagator prop(s);
        std::vector<double> n, sz;
        for (double t : times) {
          const TargetObservables o = target_observables(prop.evolve(vacuum_state(s.d), t));
          n.push_back(o.photons);
          sz.push_back(o.sigma_z);
        }
        return py::make_tuple(n, sz);
      },
      "Photon number and <sz> of the vacuum state at each time", py::arg("spec"), py::arg("times"));
  m.def(
      "truncation_error",
      [](const RabiSpec& s, int d_ref, const std::vector<double>& times) {
        const TruncationError e = truncation_error(s, d_ref, times);
        return py::make_tuple(e.photons, e.sigma_z);
      },
      py::arg("spec"), py::arg("d_ref") = 30, py::arg("times") = default_time_grid());
  m.def("default_time_grid", &default_time_grid);

  m.def("list_presets", [] {
    std::vector<py::tuple> out;
    for (const PresetInfo& p : list_presets()) out.push_back(py::make_tuple(p.name, p.description, p.parameters));
    return out;
  });
  m.def("_preset_config", [](const std::string& name) { return to_json(preset_config(name)).dump(); });
  m.def("_normalize_config", [](const std::string& text) { return to_json(config_from(text)).dump(); });
  m.def("_run_vqe", [](const std::string& text) {
    const ExperimentConfig cfg = config_from(text);
    py::gil_scoped_release release;
    return vqe_json(run_vqe(make_vqe_config(cfg))).dump();
  });
  m.def("_run_dqs", [](const std::string& text) {
    const ExperimentConfig cfg = config_from(text);
    py::gil_scoped_release release;
    return dqs_json(run_dqs(make_dqs_config(cfg))).dump();
  });
  m.def("_run_experiment", [](const std::string& text) {
    const ExperimentConfig cfg = config_from(text);
    py::gil_scoped_release release;
    const RunOutput out = run_experiment(cfg);
    json files = json::array();
    for (const auto& f : out.files) files.push_back(f.string());
    return json{{"summary", out.summary}, {"files", files}, {"checks_passed", out.checks_passed}}.dump();
  });
}
