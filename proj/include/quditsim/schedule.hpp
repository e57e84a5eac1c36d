#pragma once

#include "quditsim/hardware.hpp"

#include <nlohmann/json.hpp>

#include <variant>
#include <vector>

namespace quditsim {

enum class EnvelopeShape { Gaussian, Rectangular };

/// One microwave pulse driving a single labeled transition (upper, lower),
/// where `upper` has total m one unit above `lower`.
///
/// The lab-frame field is B1(t) cos(2 pi f t + phase) with f = frame
/// frequency = E_upper - E_lower + detuning (signed; negative when the
/// higher-m level lies lower in energy). Rotations are resonant; phase pulses
/// of the physical diagonal mode carry a nonzero detuning.
struct PulseSegment {
  double t_start_ns = 0.0;
  double duration_ns = 0.0;
  double sigma_ns = 0.0;  // Gaussian width; unused for rectangular pulses
  EnvelopeShape shape = EnvelopeShape::Gaussian;
  double amplitude_t = 0.0;  // peak B1 in tesla
  double frame_frequency_ghz = 0.0;
  double detuning_ghz = 0.0;
  double phase_rad = 0.0;
  int upper = 0;
  int lower = 0;
  ProductLabel upper_label;
  ProductLabel lower_label;
  double theta = 0.0;  // requested rotation angle
  int gate_index = -1;

  double t_end_ns() const { return t_start_ns + duration_ns; }
  /// Physical carrier |f| and the matching phase of cos(2 pi |f| t + phase).
  double carrier_ghz() const;
  double carrier_phase_rad() const;
};

/// Zero-duration frame update: F <- diag(e^{-i phases}) F.
struct VirtualPhase {
  double t_ns = 0.0;
  std::vector<double> phases;
  int gate_index = -1;
};

using ScheduleItem = std::variant<PulseSegment, VirtualPhase>;

struct PulseSchedule {
  int dim = 0;
  std::vector<ScheduleItem> items;
  double duration_ns = 0.0;

  int pulse_count() const;
  /// Summed pulse time of each gate (index < gate_count).
  std::vector<double> gate_durations(int gate_count) const;
};

/// B1(t) in tesla; zero outside the segment.
double envelope(const PulseSegment& seg, double t_ns);

/// Segment list with frequencies in GHz, times in ns and amplitudes in mT.
nlohmann::json to_json(const PulseSchedule& schedule);

}  // namespace quditsim
