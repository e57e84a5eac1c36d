#include "quditsim/pulse_compiler.hpp"

#include "quditsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

namespace quditsim {

void validate(const PulsePolicy& policy) {
  if (!(policy.selectivity_factor > 0.0)) throw ConfigError("pulse policy: selectivity_factor must be > 0");
  if (!(policy.base_sigma_ns > 0.0)) throw ConfigError("pulse policy: base_sigma_ns must be > 0");
  if (!(policy.max_pulse_ns > 0.0)) throw ConfigError("pulse policy: max_pulse_ns must be > 0");
  if (!(policy.rwa_limit > 0.0)) throw ConfigError("pulse policy: rwa_limit must be > 0");
  if (policy.steps_per_sigma < 1) throw ConfigError("pulse policy: steps_per_sigma must be >= 1");
  if (policy.diagonal_mode == DiagonalMode::Physical && !policy.stark_compensation) {
    throw ConfigError("pulse policy: the physical diagonal mode needs stark_compensation");
  }
}

namespace {

constexpr double kGaussianArea = 2.5066282746310002 * 0.99730020393673979;  // sqrt(2 pi) erf(3 / sqrt 2)

std::string pair_name(const SpinSystem& sys, int upper, int lower) {
  std::ostringstream os;
  const ProductLabel u = sys.label(upper);
  const ProductLabel l = sys.label(lower);
  os << "(m1=" << u.m1 << ", m2=" << u.m2 << ") <-> (m1=" << l.m1 << ", m2=" << l.m2 << ")";
  return os.str();
}

struct Calibration {
  double amplitude = 0.0;
  ComplexMatrix u_rot;  // rotating-frame propagator at phase 0
};

constexpr double kPhasePulseTransfer = 3e-4;

double wrap(double x) { return std::remainder(x, kTwoPi); }

struct PhaseEdge {
  int upper = 0;
  int lower = 0;
  int child = 0;  // level reached through this edge in the spanning tree
  const Transition* line = nullptr;
};

/// Detuned full-cycle pulse on one pair: no net transfer, relative phase
/// arg U_aa - arg U_bb = alpha in the interaction picture.
struct PhasePulse {
  double sigma = 0.0;
  double amplitude = 0.0;
  double detuning = 0.0;
  double alpha = 0.0;  // relative phase, followed continuously from the resonant 2 pi pulse
  RealVector phases;  // arg of every diagonal element of the propagator
  double crosstalk = 0.0;  // largest off-diagonal element of the propagator
};

class Scheduler {
 public:
  Scheduler(const SpinSystem& sys, const EncodingMap& map, const PulsePolicy& policy)
      : sys_(sys), map_(map), policy_(policy) {
    frame_ = ComplexVector::Ones(sys.dim());
    out_.dim = sys.dim();
  }

  void virtual_phase(const std::vector<double>& phases, int gate) {
    for (Eigen::Index k = 0; k < frame_.size(); ++k) frame_(k) *= std::polar(1.0, -phases[k]);
    // Consecutive frame updates are merged; a net zero update is dropped.
    if (!out_.items.empty() && std::holds_alternative<VirtualPhase>(out_.items.back())) {
      auto& last = std::get<VirtualPhase>(out_.items.back());
      bool zero = true;
      for (size_t k = 0; k < phases.size(); ++k) {
        last.phases[k] += phases[k];
        zero = zero && std::abs(last.phases[k]) < 1e-15;
      }
      if (zero) out_.items.pop_back();
      return;
    }
    bool zero = true;
    for (double p : phases) zero = zero && p == 0.0;
    if (!zero) out_.items.push_back(VirtualPhase{t_, phases, gate});
  }

  void rotation(PairRotation rot, int gate) {
    // Fold theta into [0, pi]: R(-t, p) = R(t, p + pi), R(t + 2 pi) = -R(t),
    // R(t, p) = -R(2 pi - t, p + pi); the sign is a phase pi on the pair.
    double theta = rot.theta;
    double phi = rot.phi;
    bool flip = false;
    if (theta < 0.0) {
      theta = -theta;
      phi += kPi;
    }
    theta = std::fmod(theta, 2.0 * kTwoPi);
    if (theta > kTwoPi) {
      theta -= kTwoPi;
      flip = !flip;
    }
    if (theta > kPi) {
      theta = kTwoPi - theta;
      phi += kPi;
      flip = !flip;
    }
    if (flip) {
      std::vector<double> p(sys_.dim(), 0.0);
      p[rot.upper] = kPi;
      p[rot.lower] = kPi;
      virtual_phase(p, gate);
    }
    if (theta < 1e-12) return;

    const Transition* line = sys_.transitions().find(rot.upper, rot.lower);
    if (line == nullptr) {
      throw SchedulingError("no driveable transition " + pair_name(sys_, rot.upper, rot.lower));
    }
    if (std::abs(sys_.total_m(rot.upper) - sys_.total_m(rot.lower) - 1.0) > 1e-9) {
      throw SchedulingError("pair " + pair_name(sys_, rot.upper, rot.lower) + " is not a dm = 1 transition");
    }

    PulseSegment seg;
    seg.t_start_ns = t_;
    seg.shape = policy_.shape;
    seg.frame_frequency_ghz = sys_.energies()(rot.upper) - sys_.energies()(rot.lower);
    seg.upper = rot.upper;
    seg.lower = rot.lower;
    seg.upper_label = sys_.label(rot.upper);
    seg.lower_label = sys_.label(rot.lower);
    seg.theta = theta;
    seg.gate_index = gate;

    const Calibration cal = choose_width(seg, *line);
    seg.amplitude_t = cal.amplitude;

    const int a = rot.upper;
    const int b = rot.lower;
    double arg_ba = 0.0;
    double arg_bb = 0.0;
    std::vector<double> stark;
    if (policy_.stark_compensation) {
      const ComplexMatrix u0 = interaction_propagator(cal.u_rot, seg);
      arg_ba = std::arg(u0(b, a));
      arg_bb = std::arg(u0(b, b));
      stark.resize(sys_.dim());
      for (int k = 0; k < sys_.dim(); ++k) stark[k] = std::arg(u0(k, k));
    } else {
      arg_ba = -0.5 * kPi - std::arg(sys_.drive_raising()(a, b));
    }
    seg.phase_rad = phi - 0.5 * kPi - arg_ba + arg_bb - std::arg(frame_(b) * std::conj(frame_(a)));
    out_.items.push_back(seg);
    t_ = seg.t_end_ns();
    if (!stark.empty()) virtual_phase(stark, gate);
  }

  /// Diagonal gate diag(e^{-i phases}). Virtual mode: frame update. Physical
  /// mode: one detuned full-cycle pulse per edge of a spanning tree of the
  /// computational levels, solved so the relative phases across every edge
  /// are exact; only the global phase and the phases of empty
  /// non-computational levels are left to the frame.
  void diagonal(const std::vector<double>& phases, int gate) {
    if (policy_.diagonal_mode == DiagonalMode::Virtual) {
      virtual_phase(phases, gate);
      return;
    }
    auto it = diagonal_cache_.find(phases);
    if (it == diagonal_cache_.end()) it = diagonal_cache_.emplace(phases, solve_diagonal(phases)).first;
    const auto& [pulses, residual] = it->second;
    for (const auto& [e, pp] : pulses) {
      const PhaseEdge& edge = edges()[e];
      PulseSegment seg = phase_segment(edge, pp);
      seg.t_start_ns = t_;
      seg.gate_index = gate;
      out_.items.push_back(seg);
      t_ = seg.t_end_ns();
    }
    virtual_phase(residual, gate);
  }

  PulseSchedule finish() {
    out_.duration_ns = t_;
    return std::move(out_);
  }

 private:
  ComplexMatrix interaction_propagator(const ComplexMatrix& u_rot, const PulseSegment& seg) const {
    const ComplexVector p0 = rotating_frame_phases(sys_, seg.frame_frequency_ghz, seg.t_start_ns);
    const ComplexVector p1 = rotating_frame_phases(sys_, seg.frame_frequency_ghz, seg.t_end_ns());
    return p1.conjugate().asDiagonal() * u_rot * p0.asDiagonal();
  }

  double nearest_other_line(const PulseSegment& seg, const Transition& self) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& line : sys_.transitions().lines) {
      if (&line == &self) continue;
      best = std::min(best, std::abs(line.frequency_ghz - seg.carrier_ghz()));
    }
    return best;
  }

  double nominal_amplitude(const PulseSegment& seg) const {
    const double v = std::abs(sys_.drive_raising()(seg.upper, seg.lower));
    const double area = seg.shape == EnvelopeShape::Gaussian ? seg.sigma_ns * kGaussianArea : seg.duration_ns;
    return seg.theta / (kTwoPi * units::kBohrMagnetonGHzPerTesla * v * area);
  }

  Calibration calibrate(PulseSegment seg) {
    const auto key = std::make_tuple(seg.upper, seg.lower, seg.theta, seg.sigma_ns);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Calibration cal;
    seg.phase_rad = 0.0;
    seg.amplitude_t = nominal_amplitude(seg);
    const int a = seg.upper;
    const int b = seg.lower;
    for (int it = 0;; ++it) {
      cal.u_rot = rwa_segment_propagator(sys_, seg, policy_.steps_per_sigma);
      const double achieved = 2.0 * std::atan2(std::abs(cal.u_rot(b, a)), std::abs(cal.u_rot(a, a)));
      if (std::abs(achieved - seg.theta) < policy_.calibration_tolerance ||
          it + 1 >= policy_.max_calibration_iterations || achieved <= 0.0) {
        break;
      }
      seg.amplitude_t *= seg.theta / achieved;
    }
    cal.amplitude = seg.amplitude_t;
    cache_.emplace(key, cal);
    return cal;
  }

  Calibration choose_width(PulseSegment& seg, const Transition& line) {
    const double gap = nearest_other_line(seg, line);
    for (int k = 1;; ++k) {
      const double sigma = k * policy_.base_sigma_ns;
      const double duration = 6.0 * sigma;
      if (duration > policy_.max_pulse_ns * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "no pulse width up to " << policy_.max_pulse_ns << " ns is selective and within the RWA limit on "
           << pair_name(sys_, seg.upper, seg.lower) << " (" << seg.carrier_ghz() << " GHz, nearest line "
           << gap << " GHz away)";
        throw SchedulingError(os.str());
      }
      seg.sigma_ns = sigma;
      seg.duration_ns = duration;
      const double width = policy_.shape == EnvelopeShape::Gaussian ? 1.0 / (kTwoPi * sigma) : 1.0 / duration;
      if (gap < policy_.selectivity_factor * width) continue;
      seg.amplitude_t = nominal_amplitude(seg);
      if (rwa_ratio(sys_, seg) >= policy_.rwa_limit * 1.05) continue;
      Calibration cal;
      if (policy_.stark_compensation) {
        cal = calibrate(seg);
      } else {
        cal.amplitude = seg.amplitude_t;
      }
      seg.amplitude_t = cal.amplitude;
      if (rwa_ratio(sys_, seg) >= policy_.rwa_limit) continue;
      return cal;
    }
  }

  using DiagonalSolution = std::pair<std::vector<std::pair<int, PhasePulse>>, std::vector<double>>;

  const std::vector<PhaseEdge>& edges() {
    if (!edges_.empty()) return edges_;
    const auto& comp = map_.computational_levels();
    std::vector<bool> in(sys_.dim(), false);
    for (int k : comp) in[k] = true;
    std::vector<bool> seen(sys_.dim(), false);
    std::deque<int> queue{comp.front()};
    seen[comp.front()] = true;
    while (!queue.empty()) {
      const int k = queue.front();
      queue.pop_front();
      for (const auto& line : sys_.transitions().lines) {
        int other = -1;
        if (line.from_level == k) other = line.to_level;
        if (line.to_level == k) other = line.from_level;
        if (other < 0 || !in[other] || seen[other]) continue;
        if (std::abs(std::abs(sys_.total_m(k) - sys_.total_m(other)) - 1.0) > 1e-9) continue;
        seen[other] = true;
        queue.push_back(other);
        const bool k_up = sys_.total_m(k) > sys_.total_m(other);
        edges_.push_back(PhaseEdge{k_up ? k : other, k_up ? other : k, other, &line});
      }
    }
    if (static_cast<int>(edges_.size()) + 1 != static_cast<int>(comp.size())) {
      throw SchedulingError("physical diagonal mode: the computational levels are not connected by driveable lines");
    }
    return edges_;
  }

  PulseSegment phase_segment(const PhaseEdge& edge, const PhasePulse& pp) const {
    PulseSegment seg;
    seg.shape = EnvelopeShape::Gaussian;
    seg.sigma_ns = pp.sigma;
    seg.duration_ns = 6.0 * pp.sigma;
    seg.amplitude_t = pp.amplitude;
    seg.detuning_ghz = pp.detuning;
    seg.frame_frequency_ghz = sys_.energies()(edge.upper) - sys_.energies()(edge.lower) + pp.detuning;
    seg.upper = edge.upper;
    seg.lower = edge.lower;
    seg.upper_label = sys_.label(edge.upper);
    seg.lower_label = sys_.label(edge.lower);
    seg.theta = kTwoPi;
    return seg;
  }

  // Residuals of a phase pulse: transfer amplitude and relative phase error.
  Eigen::Vector3d phase_residual(const PhaseEdge& edge, const PhasePulse& pp, double alpha, ComplexMatrix* u0) {
    const PulseSegment seg = phase_segment(edge, pp);
    const ComplexMatrix u = interaction_propagator(rwa_segment_propagator(sys_, seg, policy_.steps_per_sigma), seg);
    const Complex ba = u(edge.lower, edge.upper);
    if (u0 != nullptr) *u0 = u;
    return {ba.real(), ba.imag(), wrap(std::arg(u(edge.upper, edge.upper)) - std::arg(u(edge.lower, edge.lower)) - alpha)};
  }

  // Least squares in (amplitude, detuning), continued from `start` towards
  // alpha. Spectators make an exact zero of the transfer unreachable, so the
  // iteration stops on the step size and the remaining transfer is checked.
  PhasePulse solve_phase_pulse(const PhaseEdge& edge, PhasePulse start, double alpha) {
    const double a_scale = std::max(start.amplitude, 1e-9);
    const double d_scale = 1.0 / (6.0 * start.sigma);
    ComplexMatrix u0;
    phase_residual(edge, start, 0.0, &u0);
    const double measured = std::arg(u0(edge.upper, edge.upper)) - std::arg(u0(edge.lower, edge.lower));
    const double current = start.alpha + wrap(measured - start.alpha);
    const double span = alpha - current;
    const int legs = std::max(1, static_cast<int>(std::ceil(std::abs(span) / 0.25)));
    const Eigen::Vector3d weight(1.0, 1.0, 10.0);
    PhasePulse pp = start;
    for (int leg = 1; leg <= legs; ++leg) {
      const double goal = current + span * leg / legs;
      for (int it = 0; it < 40; ++it) {
        const Eigen::Vector3d r = phase_residual(edge, pp, goal, nullptr).cwiseProduct(weight);
        Eigen::Matrix<double, 3, 2> jac;
        PhasePulse q = pp;
        q.amplitude += 1e-7 * a_scale;
        jac.col(0) = (phase_residual(edge, q, goal, nullptr).cwiseProduct(weight) - r) / (1e-7 * a_scale);
        q = pp;
        q.detuning += 1e-7 * d_scale;
        jac.col(1) = (phase_residual(edge, q, goal, nullptr).cwiseProduct(weight) - r) / (1e-7 * d_scale);
        const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(-r);
        pp.amplitude += step(0);
        pp.detuning += step(1);
        if (std::abs(step(0)) < 1e-9 * a_scale && std::abs(step(1)) < 1e-9 * d_scale) break;
      }
    }
    const Eigen::Vector3d r = phase_residual(edge, pp, alpha, &u0);
    if (std::hypot(r(0), r(1)) > kPhasePulseTransfer || std::abs(r(2)) > 1e-6 || !(pp.amplitude > 0.0)) {
      throw SchedulingError("physical diagonal mode: phase pulse did not converge on " +
                            pair_name(sys_, edge.upper, edge.lower));
    }
    pp.alpha = alpha;
    pp.crosstalk = 0.0;
    for (int i = 0; i < sys_.dim(); ++i) {
      for (int j = 0; j < sys_.dim(); ++j) {
        if (i != j) pp.crosstalk = std::max(pp.crosstalk, std::abs(u0(i, j)));
      }
    }
    pp.phases.resize(sys_.dim());
    for (int k = 0; k < sys_.dim(); ++k) pp.phases(k) = std::arg(u0(k, k));
    return pp;
  }

  // Smallest admissible width for a phase pulse on `edge` realizing alpha.
  PhasePulse phase_pulse(int e, double alpha) {
    const PhaseEdge& edge = edges()[e];
    const double f = sys_.energies()(edge.upper) - sys_.energies()(edge.lower);
    int& k_min = phase_width_[e];
    for (int k = std::max(1, k_min);; ++k) {
      const double sigma = k * policy_.base_sigma_ns;
      if (6.0 * sigma > policy_.max_pulse_ns * (1.0 + 1e-12)) {
        throw SchedulingError("physical diagonal mode: no admissible phase pulse up to " +
                              std::to_string(policy_.max_pulse_ns) + " ns on " +
                              pair_name(sys_, edge.upper, edge.lower));
      }
      PhasePulse start;
      start.sigma = sigma;
      {
        PulseSegment seg = phase_segment(edge, start);
        seg.theta = kTwoPi;
        start.amplitude = nominal_amplitude(seg);
      }
      if (auto it = phase_seed_.find({e, k}); it != phase_seed_.end()) start = it->second;
      PhasePulse pp;
      try {
        pp = solve_phase_pulse(edge, start, alpha);
      } catch (const SchedulingError&) {
        continue;
      }
      const PulseSegment seg = phase_segment(edge, pp);
      const double width = 1.0 / (kTwoPi * sigma);
      double gap = std::numeric_limits<double>::infinity();
      for (const auto& line : sys_.transitions().lines) {
        if (&line != edge.line) gap = std::min(gap, std::abs(line.frequency_ghz - seg.carrier_ghz()));
      }
      if (gap < policy_.selectivity_factor * width || pp.crosstalk > kPhasePulseTransfer ||
          std::abs(f + pp.detuning) < 1e-9 ||
          rwa_ratio(sys_, seg) >= policy_.rwa_limit) {
        continue;
      }
      phase_seed_[{e, k}] = pp;
      k_min = k;
      return pp;
    }
  }

  // Newton iteration on the per-edge targets. A full-cycle pulse moves its
  // upper level by about +alpha/2 and its lower level by -alpha/2, which
  // couples edges sharing a level; the model Jacobian is D D^T / 2 for the
  // tree incidence matrix D.
  DiagonalSolution solve_diagonal(const std::vector<double>& phases) {
    const std::vector<PhaseEdge>& es = edges();
    const int n = static_cast<int>(es.size());
    Eigen::VectorXd want(n);
    for (int e = 0; e < n; ++e) want(e) = wrap(phases[es[e].lower] - phases[es[e].upper]);
    DiagonalSolution out;
    if (want.cwiseAbs().maxCoeff() < 1e-12) {
      out.second = phases;
      return out;
    }
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int f = 0; f < n; ++f) {
      for (int e = 0; e < n; ++e) {
        auto at = [&](int level) {
          return 0.5 * ((es[e].upper == level ? 1.0 : 0.0) - (es[e].lower == level ? 1.0 : 0.0));
        };
        jac(f, e) = at(es[f].upper) - at(es[f].lower);
      }
    }
    // Model: pulse e adds pi + alpha_e / 2 to its upper level and
    // pi - alpha_e / 2 to its lower one. Leaves first, each alpha is fixed
    // mod 4 pi and taken in (-2 pi, 2 pi]; the common phase c closes the
    // system at the root.
    const auto& comp = map_.computational_levels();
    double mean = 0.0;
    for (int k : comp) mean += phases[k];
    mean /= static_cast<double>(comp.size());
    std::vector<int> degree(sys_.dim(), 0);
    for (const auto& edge : es) {
      ++degree[edge.upper];
      ++degree[edge.lower];
    }
    // c is fixed mod 2 pi / n_levels; keep the choice with the smallest pulses.
    Eigen::VectorXd alpha;
    for (size_t j = 0; j < comp.size(); ++j) {
      const double c = mean + kTwoPi * static_cast<double>(j) / static_cast<double>(comp.size());
      std::vector<double> acc(sys_.dim(), 0.0);
      Eigen::VectorXd trial(n);
      for (int e = n - 1; e >= 0; --e) {
        const int v = es[e].child;
        const double sign = v == es[e].upper ? 1.0 : -1.0;
        trial(e) = std::remainder(2.0 * sign * (c - phases[v] - kPi * degree[v] - acc[v]), 2.0 * kTwoPi);
        const int parent = v == es[e].upper ? es[e].lower : es[e].upper;
        acc[v] += sign * 0.5 * trial(e);
        acc[parent] -= sign * 0.5 * trial(e);
      }
      if (alpha.size() == 0 || trial.cwiseAbs().maxCoeff() < alpha.cwiseAbs().maxCoeff()) alpha = trial;
    }
    std::vector<PhasePulse> pulses(n);
    RealVector total = RealVector::Zero(sys_.dim());
    Eigen::VectorXd err_prev;
    Eigen::VectorXd step_prev;
    for (int iter = 0;; ++iter) {
      total.setZero();
      for (int e = 0; e < n; ++e) {
        pulses[e] = phase_pulse(e, alpha(e));
        total += pulses[e].phases;
      }
      Eigen::VectorXd err(n);
      for (int e = 0; e < n; ++e) err(e) = wrap(want(e) - (total(es[e].upper) - total(es[e].lower)));
      if (err.cwiseAbs().maxCoeff() <= 1e-9) break;
      if (iter >= 50) throw SchedulingError("physical diagonal mode: edge phases did not converge");
      if (iter > 0) {
        // Broyden update of the map alpha -> realized edge phases.
        const Eigen::VectorXd dy = err_prev - err;
        jac += (dy - jac * step_prev) * step_prev.transpose() / step_prev.squaredNorm();
      }
      const Eigen::VectorXd step = jac.lu().solve(err);
      alpha += step;
      err_prev = err;
      step_prev = step;
    }
    for (int e = 0; e < n; ++e) out.first.emplace_back(e, pulses[e]);
    // Realized diag(e^{i total}); the frame supplies diag(e^{-i residual}).
    out.second.resize(sys_.dim());
    const int ref = map_.computational_levels().front();
    const double global = total(ref) + phases[ref];
    for (int k = 0; k < sys_.dim(); ++k) out.second[k] = wrap(total(k) + phases[k] - global);
    return out;
  }

  const SpinSystem& sys_;
  const EncodingMap& map_;
  const PulsePolicy& policy_;
  std::vector<PhaseEdge> edges_;
  std::map<std::vector<double>, DiagonalSolution> diagonal_cache_;
  std::map<std::pair<int, int>, PhasePulse> phase_seed_;
  std::map<int, int> phase_width_;
  ComplexVector frame_;
  double t_ = 0.0;
  PulseSchedule out_;
  std::map<std::tuple<int, int, double, double>, Calibration> cache_;
};

}  // namespace

PulseSchedule schedule_pulses(const Circuit& gates, const SpinSystem& sys, const EncodingMap& map,
                              const PulsePolicy& policy) {
  validate(policy);
  if (sys.dim() != map.hardware_dim() || sys.qubit_dim() != map.qubit_dim()) {
    throw ConfigError("schedule_pulses: encoding does not match the hardware dimensions");
  }
  Scheduler sched(sys, map, policy);
  for (size_t g = 0; g < gates.size(); ++g) {
    const int gi = static_cast<int>(g);
    if (const auto* diag = std::get_if<DiagonalPhase>(&gates[g])) {
      if (static_cast<int>(diag->phases.size()) != sys.dim()) {
        throw ConfigError("DiagonalPhase: expected one phase per hardware level");
      }
      sched.diagonal(diag->phases, gi);
      continue;
    }
    for (const auto& rot : pair_rotations(gates[g], map)) sched.rotation(rot, gi);
  }
  return sched.finish();
}

}  // namespace quditsim
