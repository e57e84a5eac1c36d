#include "quditsim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace quditsim {

namespace {

double rate_from_t2(double t2_us) {
  if (!(t2_us > 0.0)) throw ConfigError("dephasing: T2 must be positive");
  return std::isinf(t2_us) ? 0.0 : 1.0 / (1000.0 * t2_us);
}

ComplexMatrix dissipator(const ComplexMatrix& rho, const ComplexMatrix& s, double rate) {
  if (rate == 0.0) return ComplexMatrix::Zero(rho.rows(), rho.cols());
  const ComplexMatrix s2 = s * s;
  return rate * (2.0 * s * rho * s - s2 * rho - rho * s2);
}

void conjugate_diagonal(ComplexMatrix& rho, const ComplexVector& p) {
  for (Eigen::Index j = 0; j < rho.rows(); ++j)
    for (Eigen::Index k = 0; k < rho.cols(); ++k) rho(j, k) *= p(j) * std::conj(p(k));
}

ComplexMatrix logical_state(const ComplexMatrix& rho_i, const ComplexVector& frame) {
  ComplexMatrix out = rho_i;
  conjugate_diagonal(out, frame);
  return out;
}

void apply_virtual(ComplexVector& frame, const VirtualPhase& v) {
  if (static_cast<Eigen::Index>(v.phases.size()) != frame.size()) {
    throw ConfigError("virtual phase: expected one phase per hardware level");
  }
  for (Eigen::Index k = 0; k < frame.size(); ++k) frame(k) *= std::polar(1.0, -v.phases[k]);
}

void check_dims(const DensityMatrix& rho, int dim, const char* who) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw ConfigError(std::string(who) + ": density matrix has wrong dimension");
  }
}

double drive_ghz(const PulseSegment& seg, double t_ns) {
  return units::kBohrMagnetonGHzPerTesla * envelope(seg, t_ns);
}

}  // namespace

Dephasing Dephasing::from_t2(double t2_us, double t2_qubit_us) {
  return {rate_from_t2(t2_us), rate_from_t2(t2_qubit_us)};
}

Dephasing Dephasing::from_spec(const HardwareSpec& spec) {
  return from_t2(spec.qudit_T2(), spec.qubit_T2());
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h_ghz, const ComplexMatrix& sz1,
                           const ComplexMatrix& sz2, const Dephasing& deph) {
  ComplexMatrix out = -kI * kTwoPi * commutator(h_ghz, rho);
  out += dissipator(rho, sz1, deph.qudit_rate);
  out += dissipator(rho, sz2, deph.qubit_rate);
  return out;
}

DephasingChannel::DephasingChannel(const SpinSystem& sys, const Dephasing& deph) : active_(deph.active()) {
  if (!active_) return;
  w_ = sys.eigenvectors();
  const int n = sys.dim();
  const int d2 = sys.qubit_dim();
  const SpinOperators q = spin_matrices(sys.spec().S1);
  const SpinOperators c = spin_matrices(sys.spec().s2);
  rate_.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double d1 = q.m[j / d2] - q.m[k / d2];
      const double dq = c.m[j % d2] - c.m[k % d2];
      rate_(j, k) = deph.qudit_rate * d1 * d1 + deph.qubit_rate * dq * dq;
    }
  }
}

void DephasingChannel::apply(ComplexMatrix& rho, double dt_ns) const {
  if (!active_ || dt_ns <= 0.0) return;
  ComplexMatrix x = w_ * rho * w_.adjoint();
  x.array() *= (-dt_ns * rate_.array()).exp().cast<Complex>();
  rho = w_.adjoint() * x * w_;
}

void apply_label_dephasing(ComplexMatrix& rho, const EncodingMap& map, const Dephasing& deph, double dt_ns) {
  if (!deph.active() || dt_ns <= 0.0) return;
  const int n = map.hardware_dim();
  check_dims(rho, n, "apply_label_dephasing");
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double d1 = map.m1_of(j) - map.m1_of(k);
      const double d2 = map.m2_of(j) - map.m2_of(k);
      rho(j, k) *= std::exp(-dt_ns * (deph.qudit_rate * d1 * d1 + deph.qubit_rate * d2 * d2));
    }
  }
}

TrajectorySample sample_state(const DensityMatrix& rho, const EncodingMap& map, double t_ns) {
  TrajectorySample s;
  s.t_ns = t_ns;
  s.trace = rho.trace().real();
  const HardwareObservables obs = measure_observables(rho / s.trace, map);
  s.photons = obs.photons;
  s.sigma_z = obs.sigma_z;
  s.leakage = obs.leakage;
  s.min_eigenvalue = min_eigenvalue(rho);
  return s;
}

DensityMatrix pure_density(const ComplexVector& psi) { return psi * psi.adjoint(); }

// ---------------------------------------------------------------------------
// Rotating-frame backend

int segment_steps(const PulseSegment& seg, int steps_per_sigma) {
  if (steps_per_sigma < 1) throw ConfigError("steps_per_sigma must be >= 1");
  const double width = seg.shape == EnvelopeShape::Gaussian ? seg.sigma_ns : seg.duration_ns / 6.0;
  return std::max(1, static_cast<int>(std::lround(seg.duration_ns / width * steps_per_sigma)));
}

double rwa_ratio(const SpinSystem& sys, const PulseSegment& seg) {
  const double rabi = units::kBohrMagnetonGHzPerTesla * std::abs(seg.amplitude_t) *
                      std::abs(sys.drive_raising()(seg.upper, seg.lower));
  return rabi / std::abs(seg.frame_frequency_ghz);
}

ComplexVector rotating_frame_phases(const SpinSystem& sys, double frame_frequency_ghz, double t_ns) {
  const int n = sys.dim();
  ComplexVector p(n);
  for (int k = 0; k < n; ++k) {
    p(k) = std::polar(1.0, kTwoPi * (frame_frequency_ghz * sys.total_m(k) - sys.energies()(k)) * t_ns);
  }
  return p;
}

namespace {

struct RwaSegmentModel {
  RealVector diag;
  ComplexMatrix coupling;  // (e^{-i phase} V+ + h.c.) / 2

  RwaSegmentModel(const SpinSystem& sys, const PulseSegment& seg) {
    const int n = sys.dim();
    diag.resize(n);
    for (int k = 0; k < n; ++k) diag(k) = sys.energies()(k) - seg.frame_frequency_ghz * sys.total_m(k);
    const ComplexMatrix vp = std::polar(1.0, -seg.phase_rad) * sys.drive_raising();
    coupling = 0.5 * (vp + vp.adjoint());
  }

  ComplexMatrix step(double b_ghz, double dt_ns) const {
    ComplexMatrix h = b_ghz * coupling;
    h.diagonal() += diag.cast<Complex>();
    return expm_hermitian(h, kTwoPi * dt_ns);
  }
};

}  // namespace

ComplexMatrix rwa_segment_propagator(const SpinSystem& sys, const PulseSegment& seg, int steps_per_sigma) {
  const RwaSegmentModel model(sys, seg);
  const int steps = segment_steps(seg, steps_per_sigma);
  const double dt = seg.duration_ns / steps;
  ComplexMatrix u = identity(sys.dim());
  for (int s = 0; s < steps; ++s) {
    const double tm = seg.t_start_ns + (s + 0.5) * dt;
    u = model.step(drive_ghz(seg, tm), dt) * u;
  }
  return u;
}

namespace {

// Free evolution with dephasing between pulses; in the frame f = 0 the state
// is the lab-frame density matrix.
void free_interval(ComplexMatrix& rho_i, const SpinSystem& sys, const DephasingChannel& chan, double ta,
                   double tb) {
  if (!chan.active() || tb <= ta) return;
  const RealVector& e = sys.energies();
  const double spread = e.maxCoeff() - e.minCoeff();
  const int steps = std::max(1, static_cast<int>(std::ceil((tb - ta) * spread * 20.0)));
  const double dt = (tb - ta) / steps;
  ComplexMatrix rho = rho_i;
  conjugate_diagonal(rho, rotating_frame_phases(sys, 0.0, ta));
  ComplexVector u(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) u(k) = std::polar(1.0, -kTwoPi * e(k) * dt);
  for (int s = 0; s < steps; ++s) {
    chan.apply(rho, 0.5 * dt);
    conjugate_diagonal(rho, u);
    chan.apply(rho, 0.5 * dt);
  }
  conjugate_diagonal(rho, rotating_frame_phases(sys, 0.0, tb).conjugate());
  rho_i = rho;
}

}  // namespace

Trajectory evolve_rotating_frame(const DensityMatrix& rho0, const SpinSystem& sys, const PulseSchedule& schedule,
                                 const EncodingMap& map, const Dephasing& deph, const RwaOptions& opts) {
  check_dims(rho0, sys.dim(), "evolve_rotating_frame");
  if (!sys.conserves_total_m()) {
    throw PhysicsError("rotating-frame backend requires Jx == Jy (total m conservation)");
  }
  const DephasingChannel chan(sys, deph);
  ComplexMatrix rho = rho0;
  ComplexVector frame = ComplexVector::Ones(sys.dim());
  double t = 0.0;
  Trajectory traj;
  if (opts.record_samples) traj.samples.push_back(sample_state(rho, map, t));

  for (const auto& item : schedule.items) {
    if (const auto* v = std::get_if<VirtualPhase>(&item)) {
      apply_virtual(frame, *v);
      continue;
    }
    const auto& seg = std::get<PulseSegment>(item);
    free_interval(rho, sys, chan, t, seg.t_start_ns);
    const double ratio = rwa_ratio(sys, seg);
    if (ratio >= opts.rwa_limit) {
      throw PhysicsError("rotating-frame backend: Rabi/carrier ratio " + std::to_string(ratio) +
                         " exceeds the RWA limit on the " + std::to_string(seg.carrier_ghz()) + " GHz line");
    }
    conjugate_diagonal(rho, rotating_frame_phases(sys, seg.frame_frequency_ghz, seg.t_start_ns));
    const RwaSegmentModel model(sys, seg);
    const int steps = segment_steps(seg, opts.steps_per_sigma);
    const double dt = seg.duration_ns / steps;
    for (int s = 0; s < steps; ++s) {
      const double tm = seg.t_start_ns + (s + 0.5) * dt;
      const ComplexMatrix u = model.step(drive_ghz(seg, tm), dt);
      chan.apply(rho, 0.5 * dt);
      rho = u * rho * u.adjoint();
      chan.apply(rho, 0.5 * dt);
    }
    conjugate_diagonal(rho, rotating_frame_phases(sys, seg.frame_frequency_ghz, seg.t_end_ns()).conjugate());
    t = seg.t_end_ns();
    if (opts.record_samples) traj.samples.push_back(sample_state(logical_state(rho, frame), map, t));
  }
  free_interval(rho, sys, chan, t, schedule.duration_ns);
  t = std::max(t, schedule.duration_ns);
  traj.rho = logical_state(rho, frame);
  if (opts.record_samples) traj.samples.push_back(sample_state(traj.rho, map, t));
  return traj;
}

// ---------------------------------------------------------------------------
// Lab-frame backend

double lab_fastest_frequency(const SpinSystem& sys, const PulseSchedule& schedule) {
  const ComplexMatrix& v = sys.drive();
  const RealVector& e = sys.energies();
  double spacing = 0.0;
  for (int j = 0; j < sys.dim(); ++j)
    for (int k = 0; k < sys.dim(); ++k)
      if (std::abs(v(j, k)) > 1e-12) spacing = std::max(spacing, std::abs(e(j) - e(k)));
  double carrier = 0.0;
  for (const auto& item : schedule.items) {
    if (const auto* seg = std::get_if<PulseSegment>(&item)) carrier = std::max(carrier, seg->carrier_ghz());
  }
  return spacing + carrier;
}

double lab_max_dt(const SpinSystem& sys, const PulseSchedule& schedule) {
  return 1.0 / (40.0 * lab_fastest_frequency(sys, schedule));
}

namespace {

class LabIntegrator {
 public:
  LabIntegrator(const SpinSystem& sys, const Dephasing& deph)
      : sys_(sys), deph_(deph), e_(sys.energies()), v_(sys.drive()), sz1_(sys.sz1()), sz2_(sys.sz2()) {}

  // p_k = exp(2 pi i E_k t); V_I = diag(p) V diag(p*).
  ComplexVector phases(double t) const {
    ComplexVector p(e_.size());
    for (Eigen::Index k = 0; k < e_.size(); ++k) p(k) = std::polar(1.0, kTwoPi * e_(k) * t);
    return p;
  }

  double field(const PulseSegment* seg, double t) const {
    if (seg == nullptr) return 0.0;
    return drive_ghz(*seg, t) * std::cos(kTwoPi * seg->frame_frequency_ghz * t + seg->phase_rad);
  }

  ComplexVector rhs(const PulseSegment* seg, double t, const ComplexVector& psi) const {
    const double b = field(seg, t);
    if (b == 0.0) return ComplexVector::Zero(psi.size());
    const ComplexVector p = phases(t);
    const ComplexVector x = p.conjugate().cwiseProduct(psi);
    return (-kI * kTwoPi * b) * p.cwiseProduct(v_ * x);
  }

  ComplexMatrix rhs(const PulseSegment* seg, double t, const ComplexMatrix& rho) const {
    const ComplexVector p = phases(t);
    // Lab-frame copy, where the dissipator and V take their labeled form.
    ComplexMatrix x = rho;
    conjugate_diagonal(x, p.conjugate());
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    const double b = field(seg, t);
    if (b != 0.0) out += (-kI * kTwoPi * b) * commutator(v_, x);
    out += dissipator(x, sz1_, deph_.qudit_rate);
    out += dissipator(x, sz2_, deph_.qubit_rate);
    conjugate_diagonal(out, p);
    return out;
  }

  template <class State>
  void integrate(State& y, const PulseSegment* seg, double ta, double tb, double dt_max) const {
    if (tb <= ta) return;
    const int steps = static_cast<int>(std::ceil((tb - ta) / dt_max * (1.0 - 1e-12)));
    const double h = (tb - ta) / steps;
    for (int s = 0; s < steps; ++s) {
      const double t = ta + s * h;
      const State k1 = rhs(seg, t, y);
      const State k2 = rhs(seg, t + 0.5 * h, State(y + (0.5 * h) * k1));
      const State k3 = rhs(seg, t + 0.5 * h, State(y + (0.5 * h) * k2));
      const State k4 = rhs(seg, t + h, State(y + h * k3));
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }

 private:
  const SpinSystem& sys_;
  Dephasing deph_;
  RealVector e_;
  ComplexMatrix v_, sz1_, sz2_;
};

}  // namespace

Trajectory evolve_lab_frame(const DensityMatrix& rho0, const SpinSystem& sys, const PulseSchedule& schedule,
                            const EncodingMap& map, const Dephasing& deph, const LabOptions& opts) {
  check_dims(rho0, sys.dim(), "evolve_lab_frame");
  const double dt_max = lab_max_dt(sys, schedule);
  const double dt = opts.dt_ns > 0.0 ? opts.dt_ns : dt_max;
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw ConfigError("evolve_lab_frame: dt = " + std::to_string(dt) + " ns exceeds 1/(40 f_max) = " +
                      std::to_string(dt_max) + " ns");
  }
  const LabIntegrator integ(sys, deph);

  // Without dephasing a pure initial state is propagated as a vector.
  bool pure = false;
  ComplexVector psi;
  if (!deph.active()) {
    const EigenDecomposition eig = eig_hermitian(0.5 * (rho0 + rho0.adjoint()));
    const Eigen::Index top = eig.values.size() - 1;
    if (std::abs(eig.values(top) - rho0.trace().real()) < 1e-12) {
      pure = true;
      psi = eig.vectors.col(top) * std::sqrt(eig.values(top));
    }
  }
  ComplexMatrix rho = rho0;
  ComplexVector frame = ComplexVector::Ones(sys.dim());
  double t = 0.0;
  Trajectory traj;
  auto current = [&]() { return pure ? pure_density(psi) : rho; };
  if (opts.record_samples) traj.samples.push_back(sample_state(rho0, map, t));

  for (const auto& item : schedule.items) {
    if (const auto* v = std::get_if<VirtualPhase>(&item)) {
      apply_virtual(frame, *v);
      continue;
    }
    const auto& seg = std::get<PulseSegment>(item);
    if (!pure) integ.integrate(rho, nullptr, t, seg.t_start_ns, dt);
    if (pure) {
      integ.integrate(psi, &seg, seg.t_start_ns, seg.t_end_ns(), dt);
    } else {
      integ.integrate(rho, &seg, seg.t_start_ns, seg.t_end_ns(), dt);
    }
    t = seg.t_end_ns();
    if (opts.record_samples) traj.samples.push_back(sample_state(logical_state(current(), frame), map, t));
  }
  if (!pure) integ.integrate(rho, nullptr, t, schedule.duration_ns, dt);
  t = std::max(t, schedule.duration_ns);
  traj.rho = logical_state(current(), frame);
  if (opts.record_samples) traj.samples.push_back(sample_state(traj.rho, map, t));
  return traj;
}

// ---------------------------------------------------------------------------
// Ideal backend

Trajectory evolve_ideal(const DensityMatrix& rho0, const Circuit& gates, const EncodingMap& map,
                        const Dephasing& deph, const std::vector<double>& gate_durations_ns) {
  check_dims(rho0, map.hardware_dim(), "evolve_ideal");
  if (!gate_durations_ns.empty() && gate_durations_ns.size() != gates.size()) {
    throw ConfigError("evolve_ideal: need one duration per gate");
  }
  Trajectory traj;
  ComplexMatrix rho = rho0;
  double t = 0.0;
  traj.samples.push_back(sample_state(rho, map, t));
  for (size_t i = 0; i < gates.size(); ++i) {
    const ComplexMatrix u = gate_unitary(gates[i], map);
    rho = u * rho * u.adjoint();
    if (!gate_durations_ns.empty()) {
      apply_label_dephasing(rho, map, deph, gate_durations_ns[i]);
      t += gate_durations_ns[i];
    }
    traj.samples.push_back(sample_state(rho, map, t));
  }
  traj.rho = rho;
  return traj;
}

ComplexVector evolve_ideal(const ComplexVector& psi0, const Circuit& gates, const EncodingMap& map) {
  if (psi0.size() != map.hardware_dim()) throw ConfigError("evolve_ideal: state has wrong dimension");
  ComplexVector psi = psi0;
  for (const auto& g : gates) psi = gate_unitary(g, map) * psi;
  return psi;
}

}  // namespace quditsim
