#include "quditsim/schedule.hpp"

#include <cmath>

namespace quditsim {

double PulseSegment::carrier_ghz() const { return std::abs(frame_frequency_ghz); }

double PulseSegment::carrier_phase_rad() const {
  return frame_frequency_ghz < 0.0 ? -phase_rad : phase_rad;
}

int PulseSchedule::pulse_count() const {
  int n = 0;
  for (const auto& item : items) n += std::holds_alternative<PulseSegment>(item) ? 1 : 0;
  return n;
}

std::vector<double> PulseSchedule::gate_durations(int gate_count) const {
  std::vector<double> out(static_cast<size_t>(gate_count), 0.0);
  for (const auto& item : items) {
    if (const auto* seg = std::get_if<PulseSegment>(&item)) {
      if (seg->gate_index >= 0 && seg->gate_index < gate_count) out[seg->gate_index] += seg->duration_ns;
    }
  }
  return out;
}

double envelope(const PulseSegment& seg, double t_ns) {
  if (t_ns < seg.t_start_ns || t_ns > seg.t_end_ns()) return 0.0;
  if (seg.shape == EnvelopeShape::Rectangular) return seg.amplitude_t;
  const double x = (t_ns - seg.t_start_ns - 0.5 * seg.duration_ns) / seg.sigma_ns;
  return seg.amplitude_t * std::exp(-0.5 * x * x);
}

namespace {

nlohmann::json label_json(const ProductLabel& l) { return {{"m1", l.m1}, {"m2", l.m2}}; }

}  // namespace

nlohmann::json to_json(const PulseSchedule& schedule) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : schedule.items) {
    if (const auto* seg = std::get_if<PulseSegment>(&item)) {
      items.push_back({
          {"type", "pulse"},
          {"gate", seg->gate_index},
          {"t_start_ns", seg->t_start_ns},
          {"duration_ns", seg->duration_ns},
          {"shape", seg->shape == EnvelopeShape::Gaussian ? "gaussian" : "rectangular"},
          {"sigma_ns", seg->sigma_ns},
          {"carrier_ghz", seg->carrier_ghz()},
          {"detuning_ghz", seg->detuning_ghz},
          {"phase_rad", seg->carrier_phase_rad()},
          {"amplitude_mT", seg->amplitude_t * 1e3},
          {"theta_rad", seg->theta},
          {"upper", label_json(seg->upper_label)},
          {"lower", label_json(seg->lower_label)},
      });
    } else {
      const auto& v = std::get<VirtualPhase>(item);
      items.push_back({{"type", "virtual_phase"}, {"gate", v.gate_index}, {"t_ns", v.t_ns}, {"phases_rad", v.phases}});
    }
  }
  return {{"dim", schedule.dim},
          {"duration_ns", schedule.duration_ns},
          {"pulse_count", schedule.pulse_count()},
          {"items", items}};
}

}  // namespace quditsim
