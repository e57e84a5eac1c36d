#include <doctest.h>

#include "quditsim/dynamics.hpp"
#include "quditsim/experiments.hpp"
#include "quditsim/pulse_compiler.hpp"

#include <cmath>
#include <random>

using namespace quditsim;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

DensityMatrix random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(n(rng), n(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

HardwareSpec uncoupled() {
  HardwareSpec s;
  s.Jx = s.Jy = s.Jz = 0.0;
  return s;
}

// Classic RK4 on the master equation.
DensityMatrix rk4(DensityMatrix rho, const ComplexMatrix& h, const ComplexMatrix& sz1, const ComplexMatrix& sz2,
                  const Dephasing& d, double t, int steps) {
  const double dt = t / steps;
  for (int k = 0; k < steps; ++k) {
    const ComplexMatrix k1 = lindblad_rhs(rho, h, sz1, sz2, d);
    const ComplexMatrix k2 = lindblad_rhs(rho + 0.5 * dt * k1, h, sz1, sz2, d);
    const ComplexMatrix k3 = lindblad_rhs(rho + 0.5 * dt * k2, h, sz1, sz2, d);
    const ComplexMatrix k4 = lindblad_rhs(rho + dt * k3, h, sz1, sz2, d);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

}  // namespace

TEST_CASE("dephasing rates from T2 in microseconds") {
  const Dephasing d = Dephasing::from_t2(10.0, 50.0);
  CHECK(d.qudit_rate == doctest::Approx(1e-4));
  CHECK(d.qubit_rate == doctest::Approx(2e-5));
  CHECK(d.active());
  CHECK_FALSE(Dephasing::from_t2(kInfiniteT2, kInfiniteT2).active());
}

TEST_CASE("coherences decay as (m - m')^2 / T2") {
  const SpinSystem sys(uncoupled());
  const Dephasing deph = Dephasing::from_t2(2.0, 5.0);
  const DephasingChannel chan(sys, deph);
  std::mt19937_64 rng(11);
  const DensityMatrix rho0 = random_density(sys.dim(), rng);
  const double t = 700.0;
  DensityMatrix rho = rho0;
  chan.apply(rho, t);
  for (int j = 0; j < sys.dim(); ++j) {
    for (int k = 0; k < sys.dim(); ++k) {
      const double d1 = sys.label(j).m1 - sys.label(k).m1;
      const double d2 = sys.label(j).m2 - sys.label(k).m2;
      const double expected = std::exp(-t * (d1 * d1 / 2000.0 + d2 * d2 / 5000.0));
      CHECK(std::abs(rho(j, k) - rho0(j, k) * expected) < 1e-14);
    }
  }
  CHECK(std::abs(rho.trace() - 1.0) < 1e-14);

  // The label shortcut agrees for the uncoupled hardware.
  const EncodingMap map(1.5, 0.5);
  DensityMatrix rho_l = rho0;
  apply_label_dephasing(rho_l, map, deph, t);
  CHECK(max_abs(rho_l - rho) < 1e-14);
}

TEST_CASE("master equation integration agrees with the exact channel") {
  HardwareSpec spec;
  const SpinSystem sys(spec);
  const Dephasing deph = Dephasing::from_t2(0.5, 1.0);
  std::mt19937_64 rng(12);
  const DensityMatrix rho0 = random_density(sys.dim(), rng);
  // Interaction picture with no drive: H = 0 in the labeled frame.
  const ComplexMatrix zero = ComplexMatrix::Zero(sys.dim(), sys.dim());
  const DensityMatrix numeric =
      rk4(sys.to_product(rho0), zero, sys.to_product(sys.sz1()), sys.to_product(sys.sz2()), deph, 300.0, 300);
  DensityMatrix exact = sys.to_product(rho0);
  const DephasingChannel chan(sys, deph);
  DensityMatrix rho = rho0;
  chan.apply(rho, 300.0);
  CHECK(max_abs(sys.to_product(rho) - numeric) < 1e-10);

  // Unitary part: -2 pi i [H, rho].
  const ComplexMatrix h = build_hardware_hamiltonian(spec);
  const ComplexMatrix rhs = lindblad_rhs(exact, h, sys.sz1(), sys.sz2(), Dephasing{});
  CHECK(max_abs(rhs - (-kTwoPi * kI) * commutator(h, exact)) < 1e-12);
}

TEST_CASE("ideal evolution applies the circuit unitary") {
  const EncodingMap map(1.5, 0.5);
  RabiSpec s;
  s.G = 0.4;
  const Circuit c = compile_trotter_circuit(s, 1.5, 3, map);
  const ComplexVector v = encoded_vacuum(map);
  const ComplexVector psi = evolve_ideal(v, c, map);
  CHECK((psi - circuit_unitary(c, map) * v).norm() < 1e-13);
  const Trajectory traj = evolve_ideal(pure_density(v), c, map);
  CHECK(max_abs(traj.rho - pure_density(psi)) < 1e-13);

  // Dephasing between gates keeps the trace and lowers the purity.
  std::vector<double> durations(c.size(), 50.0);
  const Trajectory noisy = evolve_ideal(pure_density(v), c, map, Dephasing::from_t2(1.0, 1.0), durations);
  CHECK(std::abs(noisy.rho.trace() - 1.0) < 1e-12);
  CHECK((noisy.rho * noisy.rho).trace().real() < 0.99);
  CHECK_THROWS(evolve_ideal(pure_density(v), c, map, Dephasing::from_t2(1.0, 1.0), std::vector<double>{1.0}));
}

TEST_CASE("rotating frame backend realizes the gates") {
  HardwareSpec spec;
  const SpinSystem sys(spec);
  const EncodingMap map(1.5, 0.5);
  const Circuit c{QubitRot{Axis::Y, 0.7}, CondQuditPairRot{1, Axis::X, 1.3}, QuditPairRot{0, Axis::Y, -0.9},
                  DiagonalPhase{{0.1, 0.5, -0.3, 0.2, 0.0, 0.9, -1.0, 0.4}}};
  const PulseSchedule sched = schedule_pulses(c, sys, map);
  const ComplexVector v = encoded_vacuum(map);
  const ComplexVector psi = evolve_ideal(v, c, map);
  const Trajectory traj = evolve_rotating_frame(pure_density(v), sys, sched, map, Dephasing{});
  CHECK(fidelity(traj.rho, psi) > 0.9999);
  for (const TrajectorySample& s : traj.samples) {
    CHECK(std::abs(s.trace - 1.0) < 1e-10);
    CHECK(s.min_eigenvalue > -1e-10);
  }

  // Anisotropic exchange is rejected by the rotating-frame backend.
  HardwareSpec bad = spec;
  bad.Jy = 0.0;
  const SpinSystem sys_bad(bad);
  CHECK_THROWS_AS(evolve_rotating_frame(pure_density(v), sys_bad, sched, map, Dephasing{}), PhysicsError);
}

TEST_CASE("lab frame agrees with the rotating frame for a short sequence") {
  const SpinSystem sys(HardwareSpec{});
  const EncodingMap map(1.5, 0.5);
  const Circuit c{QubitRot{Axis::Y, kPi / 2}, CondQuditPairRot{0, Axis::X, 0.8}};
  const PulseSchedule sched = schedule_pulses(c, sys, map);
  const ComplexVector v = encoded_vacuum(map);
  const ComplexVector psi = evolve_ideal(v, c, map);
  LabOptions opts;
  opts.record_samples = false;
  const Trajectory lab = evolve_lab_frame(pure_density(v), sys, sched, map, Dephasing{}, opts);
  CHECK(fidelity(lab.rho, psi) > 0.995);
  CHECK(lab_max_dt(sys, sched) == doctest::Approx(1.0 / (40.0 * lab_fastest_frequency(sys, sched))));
  opts.dt_ns = 2.0 * lab_max_dt(sys, sched);
  CHECK_THROWS_AS(evolve_lab_frame(pure_density(v), sys, sched, map, Dephasing{}, opts), ConfigError);
}
