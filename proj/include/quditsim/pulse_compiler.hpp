#pragma once

#include "quditsim/encoding.hpp"
#include "quditsim/gates.hpp"
#include "quditsim/hardware.hpp"
#include "quditsim/schedule.hpp"

namespace quditsim {

enum class DiagonalMode { Virtual, Physical };

struct PulsePolicy {
  double selectivity_factor = 5.0;
  double max_pulse_ns = 400.0;
  double base_sigma_ns = 5.0;
  EnvelopeShape shape = EnvelopeShape::Gaussian;
  /// Peak Rabi frequency / carrier must stay below this.
  double rwa_limit = 0.01;
  DiagonalMode diagonal_mode = DiagonalMode::Virtual;
  /// Calibrate each pulse on the full multilevel rotating-frame propagator:
  /// amplitude fixed so the driven pair rotates by exactly theta, and the
  /// diagonal phases picked up by every level (Stark shifts) moved into the
  /// virtual frame. When false, pulses use the two-level area formula.
  bool stark_compensation = true;
  int steps_per_sigma = 10;
  int max_calibration_iterations = 20;
  double calibration_tolerance = 1e-10;
};

void validate(const PulsePolicy& policy);

/// Compiles a gate list into sequential pulses on the labeled transitions of
/// `sys`. Every pair rotation becomes one pulse whose width is the smallest
/// multiple k * base_sigma that keeps all other lines selectivity_factor
/// spectral widths away and the drive within the RWA limit. Diagonal gates
/// become zero-time virtual frame updates, or in the physical mode one
/// detuned full-cycle (2 pi) pulse per edge of a spanning tree of the
/// computational levels, solved so that the phase differences across all
/// edges are exact and the off-diagonal crosstalk of each pulse stays below
/// 3e-4.
///
/// The result, applied to a logical-frame state by any dynamics backend,
/// realizes the gate list in the logical frame.
/// Throws SchedulingError when a transition is missing or no admissible width
/// fits in max_pulse_ns.
PulseSchedule schedule_pulses(const Circuit& gates, const SpinSystem& sys, const EncodingMap& map,
                              const PulsePolicy& policy = {});

}  // namespace quditsim
