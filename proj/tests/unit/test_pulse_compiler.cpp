#include <doctest.h>

#include "quditsim/dynamics.hpp"
#include "quditsim/experiments.hpp"
#include "quditsim/pulse_compiler.hpp"

#include <cmath>

using namespace quditsim;

namespace {

std::vector<PulseSegment> segments(const PulseSchedule& s) {
  std::vector<PulseSegment> out;
  for (const auto& item : s.items) {
    if (const auto* seg = std::get_if<PulseSegment>(&item)) out.push_back(*seg);
  }
  return out;
}

}  // namespace

TEST_CASE("pulses are resonant, sequential and selective") {
  const SpinSystem sys(HardwareSpec{});
  const EncodingMap map(1.5, 0.5);
  RabiSpec s;
  s.G = 0.5;
  const Circuit c = compile_trotter_circuit(s, 2.0, 2, map);
  const PulsePolicy policy;
  const PulseSchedule sched = schedule_pulses(c, sys, map, policy);
  const auto segs = segments(sched);
  REQUIRE(!segs.empty());
  CHECK(sched.pulse_count() == static_cast<int>(segs.size()));
  double prev_end = 0.0;
  for (const PulseSegment& seg : segs) {
    const Transition* line = sys.transitions().find(seg.upper, seg.lower);
    REQUIRE(line != nullptr);
    CHECK(seg.carrier_ghz() == doctest::Approx(line->frequency_ghz).epsilon(1e-12));
    CHECK(seg.detuning_ghz == 0.0);
    CHECK(sys.total_m(seg.upper) == doctest::Approx(sys.total_m(seg.lower) + 1.0));
    CHECK(seg.t_start_ns >= prev_end - 1e-12);
    prev_end = seg.t_end_ns();
    CHECK(seg.duration_ns == doctest::Approx(6.0 * seg.sigma_ns));
    CHECK(seg.duration_ns <= policy.max_pulse_ns);
    // Every other line sits at least selectivity_factor spectral widths away.
    for (const Transition& other : sys.transitions().lines) {
      if (&other == line) continue;
      CHECK(std::abs(other.frequency_ghz - line->frequency_ghz) >=
            policy.selectivity_factor / (kTwoPi * seg.sigma_ns) * (1.0 - 1e-12));
    }
    CHECK(rwa_ratio(sys, seg) < policy.rwa_limit);
    CHECK(envelope(seg, seg.t_start_ns + 3.0 * seg.sigma_ns) == doctest::Approx(seg.amplitude_t));
    CHECK(envelope(seg, seg.t_end_ns() + 1.0) == 0.0);
  }
  CHECK(sched.duration_ns == doctest::Approx(prev_end));
  const auto durations = sched.gate_durations(static_cast<int>(c.size()));
  double total = 0.0;
  for (double d : durations) total += d;
  CHECK(total == doctest::Approx(prev_end));

  const nlohmann::json j = to_json(sched);
  CHECK(j.at("items").size() == sched.items.size());
  CHECK(j.at("pulse_count") == sched.pulse_count());
}

TEST_CASE("scheduling errors") {
  const SpinSystem sys(HardwareSpec{});
  const EncodingMap map(1.5, 0.5);
  PulsePolicy tight;
  tight.max_pulse_ns = 5.0;
  CHECK_THROWS_AS(schedule_pulses(Circuit{QubitRot{Axis::X, 1.0}}, sys, map, tight), SchedulingError);
  PulsePolicy bad;
  bad.selectivity_factor = -1.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  // A map that does not match the hardware.
  CHECK_THROWS(schedule_pulses(Circuit{QubitRot{Axis::X, 1.0}}, sys, EncodingMap(2.5, 0.5)));
}

TEST_CASE("diagonal gates in the virtual mode take no time") {
  const SpinSystem sys(HardwareSpec{});
  const EncodingMap map(1.5, 0.5);
  const PulseSchedule sched =
      schedule_pulses(Circuit{DiagonalPhase{{0.3, -0.2, 1.0, 0.0, 0.5, 0.7, -0.4, 2.0}}}, sys, map);
  CHECK(sched.pulse_count() == 0);
  CHECK(sched.duration_ns == 0.0);
}

TEST_CASE("physical diagonal mode matches the virtual mode") {
  const SpinSystem sys(HardwareSpec{});
  const EncodingMap map(1.5, 0.5);
  const Circuit c{QubitRot{Axis::Y, 0.9}, CondQuditPairRot{0, Axis::X, 1.1}, CondQuditPairRot{1, Axis::X, 0.6},
                  DiagonalPhase{{0.0, 0.35, 1.0, 1.35, 2.0, 2.35, 3.0, 3.35}}, QubitRot{Axis::Y, -0.4}};
  PulsePolicy phys;
  phys.diagonal_mode = DiagonalMode::Physical;
  const PulseSchedule pv = schedule_pulses(c, sys, map);
  const PulseSchedule pp = schedule_pulses(c, sys, map, phys);
  CHECK(pp.pulse_count() > pv.pulse_count());
  CHECK(pp.duration_ns > pv.duration_ns);
  bool detuned = false;
  for (const PulseSegment& seg : segments(pp)) detuned = detuned || seg.detuning_ghz != 0.0;
  CHECK(detuned);

  const ComplexVector v = encoded_vacuum(map);
  const ComplexVector psi = evolve_ideal(v, c, map);
  const DensityMatrix rv = evolve_rotating_frame(pure_density(v), sys, pv, map, Dephasing{}).rho;
  const DensityMatrix rp = evolve_rotating_frame(pure_density(v), sys, pp, map, Dephasing{}).rho;
  CHECK(fidelity(rp, psi) > 0.999);
  const HardwareObservables ov = measure_observables(rv, map);
  const HardwareObservables op = measure_observables(rp, map);
  CHECK(std::abs(ov.photons - op.photons) < 1e-3);
  CHECK(std::abs(ov.sigma_z - op.sigma_z) < 1e-3);

  PulsePolicy no_stark = phys;
  no_stark.stark_compensation = false;
  CHECK_THROWS_AS(validate(no_stark), ConfigError);
}
