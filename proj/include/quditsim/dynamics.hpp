#pragma once

#include "quditsim/encoding.hpp"
#include "quditsim/gates.hpp"
#include "quditsim/hardware.hpp"
#include "quditsim/schedule.hpp"

#include <vector>

namespace quditsim {

using DensityMatrix = ComplexMatrix;

/// Pure-dephasing rates in 1/ns (T2 is given in microseconds).
struct Dephasing {
  double qudit_rate = 0.0;
  double qubit_rate = 0.0;

  static Dephasing from_t2(double t2_us, double t2_qubit_us);
  static Dephasing from_spec(const HardwareSpec& spec);
  bool active() const { return qudit_rate > 0.0 || qubit_rate > 0.0; }
};

/// d rho / dt in 1/ns for H in GHz:
///   -2 pi i [H, rho] + sum_S rate_S (2 S rho S - S^2 rho - rho S^2)
/// with S = sz1, sz2 given in the same basis as rho.
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h_ghz, const ComplexMatrix& sz1,
                           const ComplexMatrix& sz2, const Dephasing& deph);

/// Exact pure-dephasing channel for a labeled-basis density matrix. The
/// dissipator is diagonal in the product basis, where coherence (j, k) decays
/// as exp(-t [rate1 (m1j - m1k)^2 + rate2 (m2j - m2k)^2]).
class DephasingChannel {
 public:
  DephasingChannel(const SpinSystem& sys, const Dephasing& deph);
  bool active() const { return active_; }
  void apply(ComplexMatrix& rho, double dt_ns) const;

 private:
  bool active_ = false;
  ComplexMatrix w_;       // labeled -> product
  Eigen::MatrixXd rate_;  // product-basis decay rates
};

/// Elementwise dephasing using the product labels of the hardware levels.
void apply_label_dephasing(ComplexMatrix& rho, const EncodingMap& map, const Dephasing& deph, double dt_ns);

struct TrajectorySample {
  double t_ns = 0.0;
  double photons = 0.0;
  double sigma_z = 0.0;
  double leakage = 0.0;
  double trace = 1.0;
  double min_eigenvalue = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  DensityMatrix rho;  // final state in the logical frame
};

TrajectorySample sample_state(const DensityMatrix& rho, const EncodingMap& map, double t_ns);

/// Rotating-frame propagator of a segment (no dephasing), using midpoint
/// piecewise-constant steps of sigma / steps_per_sigma. In the frame
/// R = exp(-2 pi i f M t) the Hamiltonian is
///   diag(E - f M) + (b(t) / 2) (e^{-i phase} V+ + h.c.),  b = mu_B B1(t).
ComplexMatrix rwa_segment_propagator(const SpinSystem& sys, const PulseSegment& seg, int steps_per_sigma);

/// Number of midpoint steps used for a segment.
int segment_steps(const PulseSegment& seg, int steps_per_sigma);

/// Peak Rabi frequency of the driven pair divided by the carrier.
double rwa_ratio(const SpinSystem& sys, const PulseSegment& seg);

/// Diagonal of the map rho_interaction -> rho_rotating at time t.
ComplexVector rotating_frame_phases(const SpinSystem& sys, double frame_frequency_ghz, double t_ns);

struct RwaOptions {
  int steps_per_sigma = 10;
  double rwa_limit = 0.01;
  bool record_samples = true;
};

/// Per-segment rotating-frame integration. rho0 and the result are in the
/// logical frame (H0 interaction picture plus virtual phase updates).
/// Throws PhysicsError when a segment violates the RWA limit or the
/// hardware does not conserve total m.
Trajectory evolve_rotating_frame(const DensityMatrix& rho0, const SpinSystem& sys, const PulseSchedule& schedule,
                                 const EncodingMap& map, const Dephasing& deph, const RwaOptions& opts = {});

struct LabOptions {
  double dt_ns = 0.0;  // 0 selects the largest accepted step
  bool record_samples = true;
};

/// Fastest frequency in the interaction-picture drive: largest connected
/// level spacing plus the largest carrier.
double lab_fastest_frequency(const SpinSystem& sys, const PulseSchedule& schedule);
/// 1 / (40 f_fastest)
double lab_max_dt(const SpinSystem& sys, const PulseSchedule& schedule);

/// Fixed-step RK4 of the full drive b(t) cos(2 pi f t + phase) (g1 Sx1 + g2 sx2)
/// including counter-rotating terms, in the interaction picture of H0.
/// Throws ConfigError when opts.dt_ns exceeds lab_max_dt.
Trajectory evolve_lab_frame(const DensityMatrix& rho0, const SpinSystem& sys, const PulseSchedule& schedule,
                            const EncodingMap& map, const Dephasing& deph, const LabOptions& opts = {});

/// Applies exact gate unitaries. When gate_durations_ns is non-empty it must
/// have one entry per gate, and a dephasing channel of that duration follows
/// each gate.
Trajectory evolve_ideal(const DensityMatrix& rho0, const Circuit& gates, const EncodingMap& map,
                        const Dephasing& deph = {}, const std::vector<double>& gate_durations_ns = {});
ComplexVector evolve_ideal(const ComplexVector& psi0, const Circuit& gates, const EncodingMap& map);

DensityMatrix pure_density(const ComplexVector& psi);

}  // namespace quditsim
