#include "quditsim/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace quditsim {

Backend parse_backend(std::string_view name) {
  if (name == "ideal") return Backend::Ideal;
  if (name == "rwa") return Backend::Rwa;
  if (name == "lab") return Backend::Lab;
  throw ConfigError("unknown backend '" + std::string(name) + "' (expected lab, rwa or ideal)");
}

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::Ideal:
      return "ideal";
    case Backend::Rwa:
      return "rwa";
    case Backend::Lab:
      return "lab";
  }
  return "?";
}

ComplexMatrix encoded_hamiltonian(const RabiSpec& spec, const EncodingMap& map) {
  if (spec.d != map.d()) throw ConfigError("encoded_hamiltonian: RabiSpec.d does not match the qudit");
  return map.encode_operator(rabi_hamiltonian(spec));
}

double energy_expectation(const DensityMatrix& rho, const EncodingMap& map, const RabiSpec& spec) {
  if (rho.rows() != map.hardware_dim()) throw ConfigError("energy_expectation: wrong density matrix size");
  return (rho * encoded_hamiltonian(spec, map)).trace().real();
}

double sampled_energy(const DensityMatrix& rho, const EncodingMap& map, const RabiSpec& spec, long shots,
                      std::mt19937_64& rng) {
  if (shots <= 0) throw ConfigError("sampled_energy: shots must be positive");
  const EigenDecomposition eig = eig_hermitian(encoded_hamiltonian(spec, map));
  std::vector<double> p(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    p[k] = std::max(0.0, (eig.vectors.col(k).adjoint() * rho * eig.vectors.col(k))(0, 0).real());
  }
  std::discrete_distribution<int> outcome(p.begin(), p.end());
  double sum = 0.0;
  for (long s = 0; s < shots; ++s) sum += eig.values(outcome(rng));
  return sum / static_cast<double>(shots);
}

double fidelity(const DensityMatrix& rho, const ComplexVector& psi) {
  if (rho.rows() != psi.size()) throw ConfigError("fidelity: dimension mismatch");
  const double overlap = (psi.adjoint() * rho * psi)(0, 0).real();
  return std::clamp(std::sqrt(std::max(0.0, overlap)), 0.0, 1.0);
}

ComplexVector encoded_vacuum(const EncodingMap& map) { return map.encode(vacuum_state(map.d())); }

// ---------------------------------------------------------------------------
// VQE

void validate(const VqeConfig& cfg) {
  validate(cfg.hardware);
  validate(cfg.rabi);
  if (cfg.g_grid.empty()) throw ConfigError("vqe: G grid is empty");
  for (double g : cfg.g_grid) {
    if (!(g >= 0.0)) throw ConfigError("vqe: G values must be >= 0");
  }
  if (cfg.random_restarts < 0) throw ConfigError("vqe: random_restarts must be >= 0");
  if (cfg.shots < 0) throw ConfigError("vqe: shots must be >= 0");
  if (!(cfg.optimizer.f_tolerance > 0.0)) throw ConfigError("vqe: tolerance must be > 0");
  if (cfg.optimizer.max_evaluations < 1) throw ConfigError("vqe: max_evaluations must be >= 1");
}

AnsatzState prepare_ansatz(const std::vector<double>& theta, const SpinSystem& sys, const EncodingMap& map,
                           Backend backend, const PulsePolicy& policy, AnsatzVariant variant) {
  const Circuit circuit = build_vqe_ansatz(theta, map, variant);
  const ComplexVector vac = encoded_vacuum(map);
  AnsatzState out;
  if (backend == Backend::Ideal) {
    out.rho = pure_density(evolve_ideal(vac, circuit, map));
    return out;
  }
  const PulseSchedule schedule = schedule_pulses(circuit, sys, map, policy);
  out.sequence_ns = schedule.duration_ns;
  const Dephasing deph = Dephasing::from_spec(sys.spec());
  if (backend == Backend::Rwa) {
    RwaOptions opts;
    opts.steps_per_sigma = policy.steps_per_sigma;
    opts.rwa_limit = policy.rwa_limit;
    opts.record_samples = false;
    out.rho = evolve_rotating_frame(pure_density(vac), sys, schedule, map, deph, opts).rho;
  } else {
    LabOptions opts;
    opts.record_samples = false;
    out.rho = evolve_lab_frame(pure_density(vac), sys, schedule, map, deph, opts).rho;
  }
  return out;
}

std::vector<VqePoint> run_vqe(const VqeConfig& cfg) {
  validate(cfg);
  const EncodingMap map(cfg.hardware.S1, cfg.hardware.s2);
  const SpinSystem sys(cfg.hardware);
  std::vector<VqePoint> out;
  for (size_t gi = 0; gi < cfg.g_grid.size(); ++gi) {
    RabiSpec rabi = cfg.rabi;
    rabi.G = cfg.g_grid[gi];
    rabi.d = map.d();
    std::mt19937_64 rng(cfg.seed + 7919ULL * gi);

    auto objective = [&](const std::vector<double>& theta) {
      const AnsatzState st = prepare_ansatz(theta, sys, map, cfg.backend, cfg.policy, cfg.ansatz);
      if (cfg.shots > 0) return sampled_energy(st.rho, map, rabi, cfg.shots, rng);
      return energy_expectation(st.rho, map, rabi);
    };

    std::vector<std::vector<double>> starts{std::vector<double>(4, 0.0)};
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int r = 0; r < cfg.random_restarts; ++r) {
      std::vector<double> x(4);
      for (double& v : x) v = angle(rng);
      starts.push_back(x);
    }

    VqePoint pt;
    pt.G = rabi.G;
    NelderMeadResult best;
    bool have_best = false;
    for (const auto& x0 : starts) {
      NelderMeadResult res = nelder_mead(objective, x0, cfg.optimizer);
      pt.evaluations += res.evaluations;
      for (double v : res.trace) {
        pt.trace.push_back(pt.trace.empty() ? v : std::min(pt.trace.back(), v));
      }
      if (!have_best || res.value < best.value) {
        best = std::move(res);
        have_best = true;
      }
    }
    pt.theta = best.x;
    pt.converged = best.converged;

    const AnsatzState st = prepare_ansatz(pt.theta, sys, map, cfg.backend, cfg.policy, cfg.ansatz);
    pt.energy = energy_expectation(st.rho, map, rabi);
    pt.sequence_ns = st.sequence_ns;
    const HardwareObservables obs = measure_observables(st.rho, map);
    pt.photons = obs.photons;
    pt.atom_excitation = obs.sigma_z + 0.5;
    const ComplexVector psi_ideal = evolve_ideal(encoded_vacuum(map), build_vqe_ansatz(pt.theta, map, cfg.ansatz), map);
    pt.ansatz_energy = energy_expectation(pure_density(psi_ideal), map, rabi);

    const GroundState gs = exact_ground_state(rabi);
    pt.exact_energy = gs.energy;
    const TargetObservables exact_obs = target_observables(gs.state);
    pt.exact_photons = exact_obs.photons;
    pt.exact_atom_excitation = exact_obs.sigma_z + 0.5;
    out.push_back(std::move(pt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// DQS

void validate(const DqsConfig& cfg) {
  validate(cfg.hardware);
  validate(cfg.rabi);
  if (cfg.times.empty()) throw ConfigError("dqs: time grid is empty");
  for (double t : cfg.times) {
    if (!(t > 0.0)) throw ConfigError("dqs: times must be positive");
  }
  if (cfg.steps < 1 || cfg.steps_after_split < 1) throw ConfigError("dqs: Trotter step counts must be >= 1");
  if (cfg.t2_us.empty()) throw ConfigError("dqs: T2 list is empty");
  for (double t2 : cfg.t2_us) {
    if (!(t2 > 0.0)) throw ConfigError("dqs: T2 values must be positive");
  }
  if (cfg.rabi.d != spin_dim(cfg.hardware.S1)) {
    throw ConfigError("dqs: RabiSpec.d must equal 2 S1 + 1 of the hardware qudit");
  }
}

DqsResult run_dqs(const DqsConfig& cfg) {
  validate(cfg);
  const EncodingMap map(cfg.hardware.S1, cfg.hardware.s2);
  const SpinSystem sys(cfg.hardware);
  const ExactPropagator exact(cfg.rabi);
  const ComplexVector vac = encoded_vacuum(map);
  const DensityMatrix rho0 = pure_density(vac);
  const TargetState target_vac = vacuum_state(map.d());

  DqsResult result;
  for (double t2 : cfg.t2_us) {
    DqsRun run;
    run.t2_us = t2;
    result.runs.push_back(run);
  }

  for (double t : cfg.times) {
    const int steps = cfg.steps_at(t);
    const Circuit circuit = compile_trotter_circuit(cfg.rabi, t, steps, map, cfg.merge_rotations);
    const ComplexVector psi_id = evolve_ideal(vac, circuit, map);
    PulseSchedule schedule;
    try {
      schedule = schedule_pulses(circuit, sys, map, cfg.policy);
    } catch (const SchedulingError& e) {
      throw SchedulingError(cfg.name + " at t = " + std::to_string(t) + ": " + e.what());
    }
    const HardwareObservables ideal_obs = measure_observables(pure_density(psi_id), map);
    const TargetObservables exact_obs = target_observables(exact.evolve(target_vac, t));

    for (size_t r = 0; r < cfg.t2_us.size(); ++r) {
      const double t2 = cfg.t2_us[r];
      const Dephasing deph = Dephasing::from_t2(t2, cfg.hardware.T2_qubit.value_or(t2));
      Trajectory traj;
      if (cfg.backend == Backend::Ideal) {
        traj = evolve_ideal(rho0, circuit, map, deph,
                            deph.active() ? schedule.gate_durations(static_cast<int>(circuit.size()))
                                          : std::vector<double>{});
      } else if (cfg.backend == Backend::Rwa) {
        RwaOptions opts;
        opts.steps_per_sigma = cfg.policy.steps_per_sigma;
        opts.rwa_limit = cfg.policy.rwa_limit;
        traj = evolve_rotating_frame(rho0, sys, schedule, map, deph, opts);
      } else {
        traj = evolve_lab_frame(rho0, sys, schedule, map, deph);
      }

      DqsPoint pt;
      pt.t = t;
      pt.steps = steps;
      pt.pulses = schedule.pulse_count();
      pt.sequence_ns = schedule.duration_ns;
      const HardwareObservables obs = measure_observables(traj.rho / traj.rho.trace().real(), map);
      pt.photons = obs.photons;
      pt.sigma_z = obs.sigma_z;
      pt.leakage = obs.leakage;
      pt.ideal_photons = ideal_obs.photons;
      pt.ideal_sigma_z = ideal_obs.sigma_z;
      pt.exact_photons = exact_obs.photons;
      pt.exact_sigma_z = exact_obs.sigma_z;
      pt.fidelity = fidelity(traj.rho, psi_id);
      pt.min_eigenvalue = std::numeric_limits<double>::infinity();
      for (const auto& s : traj.samples) {
        pt.max_trace_error = std::max(pt.max_trace_error, std::abs(s.trace - 1.0));
        pt.min_eigenvalue = std::min(pt.min_eigenvalue, s.min_eigenvalue);
      }
      result.runs[r].points.push_back(pt);
    }
  }

  for (auto& run : result.runs) {
    double sum_f = 0.0;
    double sum_d = 0.0;
    for (const auto& p : run.points) {
      sum_f += p.fidelity;
      sum_d += p.sequence_ns;
      run.max_sequence_ns = std::max(run.max_sequence_ns, p.sequence_ns);
    }
    run.average_fidelity = sum_f / static_cast<double>(run.points.size());
    run.mean_sequence_ns = sum_d / static_cast<double>(run.points.size());
  }
  return result;
}

}  // namespace quditsim
