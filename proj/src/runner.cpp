#include "quditsim/runner.hpp"

#include "quditsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace quditsim {

namespace fs = std::filesystem;
using json = nlohmann::json;

bool check_factorization(const SpinSystem& sys, bool strict) {
  const LevelTable& lt = sys.levels();
  if (lt.factorization_warning && strict) {
    std::ostringstream os;
    os << "eigenstates are not close to product states (min overlap " << lt.min_overlap << " < "
       << kFactorizationThreshold << ")";
    throw PhysicsError(os.str());
  }
  return lt.factorization_warning;
}

namespace {

std::string t2_tag(double t2) { return std::isinf(t2) ? "inf" : format_number(t2); }

json num(double x) { return std::isfinite(x) ? json(x) : json(format_number(x)); }

struct Writer {
  fs::path dir;
  RunOutput& out;

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir / name;
    write_file_atomic(p, content);
    out.files.push_back(p);
  }
};

void run_spectrum(const ExperimentConfig& cfg, const SpinSystem& sys, Writer& w) {
  CsvTable levels({"label", "m1", "m2", "energy_ghz", "overlap"});
  for (const auto& l : sys.levels().levels) {
    levels.row(std::vector<double>{static_cast<double>(l.product_index), l.label.m1, l.label.m2, l.energy_ghz,
                                   l.overlap});
  }
  CsvTable lines({"from_m1", "from_m2", "to_m1", "to_m2", "frequency_ghz", "matrix_element_abs", "qudit_line"});
  double fmax = 0.0;
  for (const auto& t : sys.transitions().lines) {
    lines.row(std::vector<double>{t.from.m1, t.from.m2, t.to.m1, t.to.m2, t.frequency_ghz,
                                  std::abs(t.matrix_element), t.qudit_line ? 1.0 : 0.0});
    fmax = std::max(fmax, t.frequency_ghz);
  }
  w.write("levels.csv", levels.str());
  w.write("transitions.csv", lines.str());
  w.out.summary["levels"] = sys.dim();
  w.out.summary["transitions"] = sys.transitions().lines.size();
  w.out.summary["max_frequency_ghz"] = fmax;
  w.out.summary["min_overlap"] = sys.levels().min_overlap;
  (void)cfg;
}

void run_vqe_kind(const ExperimentConfig& cfg, Writer& w) {
  const auto points = run_vqe(make_vqe_config(cfg));
  CsvTable table({"G", "theta1", "theta2", "theta3", "theta4", "energy", "ansatz_energy", "exact_energy",
                  "photons", "atom_excitation", "exact_photons", "exact_atom_excitation", "evaluations",
                  "converged", "sequence_ns"});
  CsvTable trace({"G", "iteration", "best_energy"});
  json per_g = json::array();
  for (const auto& p : points) {
    table.row(std::vector<double>{p.G, p.theta[0], p.theta[1], p.theta[2], p.theta[3], p.energy, p.ansatz_energy,
                                  p.exact_energy, p.photons, p.atom_excitation, p.exact_photons,
                                  p.exact_atom_excitation, static_cast<double>(p.evaluations),
                                  p.converged ? 1.0 : 0.0, p.sequence_ns});
    for (size_t i = 0; i < p.trace.size(); ++i) {
      trace.row(std::vector<double>{p.G, static_cast<double>(i), p.trace[i]});
    }
    per_g.push_back({{"G", p.G}, {"energy", p.energy}, {"exact_energy", p.exact_energy}, {"converged", p.converged}});
  }
  w.write("vqe.csv", table.str());
  w.write("vqe_trace.csv", trace.str());
  w.out.summary["converged_energies"] = per_g;
}

void run_dqs_kind(const ExperimentConfig& cfg, Writer& w) {
  const DqsConfig dcfg = make_dqs_config(cfg);
  const DqsResult res = run_dqs(dcfg);
  json runs = json::array();
  for (const auto& run : res.runs) {
    CsvTable table({"t", "steps", "pulses", "t_ns", "photons", "sigma_z", "leakage", "ideal_photons",
                    "ideal_sigma_z", "exact_photons", "exact_sigma_z", "trace_error", "min_eigenvalue",
                    "fidelity_vs_ideal"});
    for (const auto& p : run.points) {
      table.row(std::vector<double>{p.t, static_cast<double>(p.steps), static_cast<double>(p.pulses),
                                    p.sequence_ns, p.photons, p.sigma_z, p.leakage, p.ideal_photons,
                                    p.ideal_sigma_z, p.exact_photons, p.exact_sigma_z, p.max_trace_error,
                                    p.min_eigenvalue, p.fidelity});
    }
    w.write("dqs_" + to_string(cfg.backend) + "_T2_" + t2_tag(run.t2_us) + ".csv", table.str());
    runs.push_back({{"t2_us", num(run.t2_us)},
                    {"average_fidelity", run.average_fidelity},
                    {"max_sequence_ns", run.max_sequence_ns},
                    {"mean_sequence_ns", run.mean_sequence_ns}});
  }
  w.out.summary["runs"] = runs;

  // Schedule dump of the longest sequence, for inspection.
  const EncodingMap map(cfg.hardware.S1, cfg.hardware.s2);
  const SpinSystem sys(cfg.hardware);
  const double t_long = *std::max_element(dcfg.times.begin(), dcfg.times.end(), [&](double a, double b) {
    return dcfg.steps_at(a) < dcfg.steps_at(b);
  });
  const Circuit circuit = compile_trotter_circuit(dcfg.rabi, t_long, dcfg.steps_at(t_long), map, dcfg.merge_rotations);
  json dump = to_json(schedule_pulses(circuit, sys, map, dcfg.policy));
  dump["t"] = t_long;
  w.write("schedule_longest.json", dump.dump(1) + "\n");
}

void run_truncation_kind(const ExperimentConfig& cfg, Writer& w) {
  RabiSpec ref = cfg.rabi;
  ref.d = cfg.truncation.d_ref;
  const ExactPropagator ref_prop(ref);
  std::vector<ExactPropagator> props;
  std::vector<std::string> header{"t", "photons_dref", "sigma_z_dref"};
  for (int d : cfg.truncation.d_values) {
    RabiSpec r = cfg.rabi;
    r.d = d;
    props.emplace_back(r);
    header.push_back("photons_d" + std::to_string(d));
    header.push_back("sigma_z_d" + std::to_string(d));
  }
  CsvTable table(header);
  std::vector<double> dev_n(props.size(), 0.0), dev_s(props.size(), 0.0);
  for (double t : cfg.times) {
    const TargetObservables o_ref = target_observables(ref_prop.evolve(vacuum_state(ref.d), t));
    std::vector<double> row{t, o_ref.photons, o_ref.sigma_z};
    for (size_t i = 0; i < props.size(); ++i) {
      const TargetObservables o = target_observables(props[i].evolve(vacuum_state(props[i].spec().d), t));
      row.push_back(o.photons);
      row.push_back(o.sigma_z);
      dev_n[i] = std::max(dev_n[i], std::abs(o.photons - o_ref.photons));
      dev_s[i] = std::max(dev_s[i], std::abs(o.sigma_z - o_ref.sigma_z));
    }
    table.row(row);
  }
  w.write("truncation.csv", table.str());
  json devs = json::array();
  for (size_t i = 0; i < props.size(); ++i) {
    devs.push_back({{"d", cfg.truncation.d_values[i]}, {"max_photon_deviation", dev_n[i]},
                    {"max_sigma_z_deviation", dev_s[i]}});
  }
  w.out.summary["d_ref"] = cfg.truncation.d_ref;
  w.out.summary["deviations"] = devs;
}

void run_gates_check(const ExperimentConfig& cfg, const SpinSystem& sys, Writer& w) {
  const EncodingMap map(cfg.hardware.S1, cfg.hardware.s2);
  RabiSpec rabi = cfg.rabi;
  rabi.d = map.d();
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    all = all && ok;
    checks.push_back({{"check", name}, {"value", value}, {"tolerance", tol}, {"pass", ok}});
  };

  const double t = cfg.times.front();
  const Circuit merged = compile_trotter_circuit(rabi, t, cfg.steps, map, true);
  const Circuit plain = compile_trotter_circuit(rabi, t, cfg.steps, map, false);
  const ComplexMatrix um = circuit_unitary(merged, map);
  const ComplexMatrix up = circuit_unitary(plain, map);
  const auto& comp = map.computational_levels();
  ComplexMatrix block(comp.size(), comp.size());
  for (size_t i = 0; i < comp.size(); ++i)
    for (size_t j = 0; j < comp.size(); ++j) block(i, j) = um(comp[i], comp[j]);
  record("computational_block_unitarity", unitarity_defect(block), 1e-10);
  record("merged_equals_unmerged", (um - up).cwiseAbs().maxCoeff(), 1e-12);

  const PulseSchedule sched = schedule_pulses(merged, sys, map, cfg.policy);
  double carrier_mismatch = 0.0;
  for (const auto& item : sched.items) {
    if (const auto* seg = std::get_if<PulseSegment>(&item)) {
      const Transition* line = sys.transitions().find(seg->upper, seg->lower);
      const double off = line ? std::abs(line->frequency_ghz - seg->carrier_ghz()) - std::abs(seg->detuning_ghz) : 1e300;
      carrier_mismatch = std::max(carrier_mismatch, off);
    }
  }
  record("carriers_on_transition_table", carrier_mismatch, 1e-9);

  const ComplexVector vac = encoded_vacuum(map);
  const ComplexVector psi = evolve_ideal(vac, merged, map);
  const Trajectory ideal = evolve_ideal(pure_density(vac), merged, map);
  record("ideal_pipeline_closure", 1.0 - fidelity(ideal.rho, psi), 1e-9);

  w.write("gates_check.json", json{{"checks", checks}}.dump(1) + "\n");
  w.out.summary["checks"] = checks;
  w.out.summary["sequence_ns"] = sched.duration_ns;
  w.out.checks_passed = all;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  RunOutput out;
  Writer w{fs::path(cfg.output_dir), out};
  const json cfg_json = to_json(cfg);
  out.summary["kind"] = to_string(cfg.kind);
  out.summary["preset"] = cfg.preset;
  json hashed = cfg_json;
  hashed.erase("output_dir");
  out.summary["config_hash"] = fnv1a_hex(hashed.dump());

  if (cfg.kind != ExperimentKind::Truncation) {
    const SpinSystem sys(cfg.hardware);
    out.summary["factorization_warning"] = check_factorization(sys, cfg.strict_factorization);
    if (cfg.kind == ExperimentKind::Spectrum) run_spectrum(cfg, sys, w);
    if (cfg.kind == ExperimentKind::GatesCheck) run_gates_check(cfg, sys, w);
  }
  if (cfg.kind == ExperimentKind::Vqe) run_vqe_kind(cfg, w);
  if (cfg.kind == ExperimentKind::Dqs) run_dqs_kind(cfg, w);
  if (cfg.kind == ExperimentKind::Truncation) run_truncation_kind(cfg, w);

  w.write("config.json", cfg_json.dump(1) + "\n");
  w.write("summary.json", out.summary.dump(1) + "\n");
  return out;
}

}  // namespace quditsim
