#include <doctest.h>

#include "quditsim/encoding.hpp"
#include "quditsim/gates.hpp"
#include "quditsim/operators.hpp"

#include <cmath>
#include <random>

using namespace quditsim;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TargetState random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  TargetState psi(dim);
  for (int k = 0; k < dim; ++k) psi(k) = Complex(n(rng), n(rng));
  return psi / psi.norm();
}

// Hardware unitary restricted to the computational levels, in target order.
ComplexMatrix logical_block(const ComplexMatrix& u, const EncodingMap& map) {
  const int n = 2 * map.d();
  ComplexMatrix out(n, n);
  for (int j = 0; j < n; ++j) {
    TargetState e = TargetState::Zero(n);
    e(j) = 1.0;
    out.col(j) = map.decode(u * map.encode(e));
  }
  return out;
}

// |Tr(A^dag B)| / dim; 1 when A and B agree up to a global phase.
double phase_insensitive_overlap(const ComplexMatrix& a, const ComplexMatrix& b) {
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

// Symmetric Trotter step built directly from the target operators.
ComplexMatrix oracle_step(const RabiSpec& s, double tau) {
  const BosonOperators b = boson_matrices(s.d);
  const SpinOperators a = spin_matrices(0.5);
  ComplexMatrix x_odd = ComplexMatrix::Zero(s.d, s.d);
  ComplexMatrix x_even = ComplexMatrix::Zero(s.d, s.d);
  for (int n = 0; n + 1 < s.d; ++n) {
    ComplexMatrix& x = n % 2 ? x_odd : x_even;
    x(n, n + 1) = x(n + 1, n) = std::sqrt(n + 1.0);
  }
  const ComplexMatrix h_odd = 2.0 * s.G * kron(x_odd, a.Sx);
  const ComplexMatrix h_even = 2.0 * s.G * kron(x_even, a.Sx);
  const ComplexMatrix h_atom = s.omega_a * kron(identity(s.d), a.Sz);
  const ComplexMatrix h_photon = s.Omega * kron(b.n, identity(2));
  return expm_hermitian(h_atom, tau) * expm_hermitian(h_photon, tau) * expm_hermitian(h_odd, tau / 2) *
         expm_hermitian(h_even, tau) * expm_hermitian(h_odd, tau / 2);
}

}  // namespace

TEST_CASE("encoding places photons on the qudit and the atom on the carrier") {
  const EncodingMap map(1.5, 0.5);
  CHECK(map.d() == 4);
  CHECK(map.hardware_dim() == 8);
  CHECK(map.leakage_levels().empty());
  for (int n = 0; n < 4; ++n) {
    for (bool up : {true, false}) {
      const int h = map.hardware_index(n, up);
      CHECK(map.m1_of(h) == doctest::Approx(n - 1.5));
      CHECK(map.m2_of(h) == doctest::Approx(up ? 0.5 : -0.5));
    }
  }
  std::mt19937_64 rng(3);
  const TargetState psi = random_state(8, rng);
  CHECK((map.decode(map.encode(psi)) - psi).norm() < 1e-15);
  CHECK((decode_state(encode_state(psi, map), map) - psi).norm() < 1e-15);
}

TEST_CASE("spin-1 carrier leaves m2 = -1 as leakage") {
  const EncodingMap map(1.5, 1.0);
  CHECK(map.hardware_dim() == 12);
  REQUIRE(map.leakage_levels().size() == 4);
  for (int l : map.leakage_levels()) CHECK(map.m2_of(l) == doctest::Approx(-1.0));
  for (int n = 0; n < 4; ++n) {
    CHECK(map.m2_of(map.hardware_index(n, true)) == doctest::Approx(1.0));
    CHECK(map.m2_of(map.hardware_index(n, false)) == doctest::Approx(0.0));
  }
  // Leakage population shows up in the observables.
  ComplexMatrix rho = ComplexMatrix::Zero(12, 12);
  rho(map.leakage_levels()[0], map.leakage_levels()[0]) = 0.25;
  rho(map.hardware_index(2, true), map.hardware_index(2, true)) = 0.75;
  const HardwareObservables obs = measure_observables(rho, map);
  CHECK(obs.leakage == doctest::Approx(0.25));
  CHECK(obs.sigma_z == doctest::Approx(0.375));
}

TEST_CASE("encoded operators act like the target operators") {
  const EncodingMap map(1.5, 0.5);
  RabiSpec s;
  s.G = 0.4;
  const ComplexMatrix h = rabi_hamiltonian(s);
  const ComplexMatrix enc = map.encode_operator(h);
  std::mt19937_64 rng(5);
  const TargetState psi = random_state(8, rng);
  CHECK((map.decode(enc * map.encode(psi)) - h * psi).norm() < 1e-13);
  const ComplexMatrix rho = map.encode(psi) * map.encode(psi).adjoint();
  CHECK(max_abs(map.project(rho) - psi * psi.adjoint()) < 1e-14);
}

TEST_CASE("pair rotation matrix") {
  const double theta = 0.83;
  const double phi = 0.4;
  const ComplexMatrix u = pair_rotation_unitary(PairRotation{2, 0, theta, phi}, 3);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  CHECK(std::abs(u(2, 2) - c) < 1e-15);
  CHECK(std::abs(u(0, 0) - c) < 1e-15);
  CHECK(std::abs(u(1, 1) - 1.0) < 1e-15);
  // -i sin (cos phi X + sin phi Y): <u|.|l> = -i s e^{-i phi}.
  CHECK(std::abs(u(2, 0) - (-kI * s * std::exp(-kI * phi))) < 1e-15);
  CHECK(std::abs(u(0, 2) - (-kI * s * std::exp(kI * phi))) < 1e-15);

  // On a spin 1/2, X and Y axes give e^{-i theta s_x} and e^{-i theta s_y}.
  const SpinOperators a = spin_matrices(0.5);
  CHECK(max_abs(pair_rotation_unitary(PairRotation{0, 1, theta, axis_phase(Axis::X)}, 2) -
                expm_hermitian(a.Sx, theta)) < 1e-14);
  CHECK(max_abs(pair_rotation_unitary(PairRotation{0, 1, theta, axis_phase(Axis::Y)}, 2) -
                expm_hermitian(a.Sy, theta)) < 1e-14);
}

TEST_CASE("gate unitaries") {
  const EncodingMap map(1.5, 0.5);
  const SpinOperators a = spin_matrices(0.5);
  const double th = 1.1;

  const ComplexMatrix qr = logical_block(gate_unitary(QubitRot{Axis::Y, th}, map), map);
  CHECK(max_abs(qr - kron(identity(4), expm_hermitian(a.Sy, th))) < 1e-14);

  // Conditioned rotation: +theta with the qubit up, -theta with it down.
  const ComplexMatrix cond = gate_unitary(CondQuditPairRot{1, Axis::X, th}, map);
  const ComplexMatrix plus = gate_unitary(QuditPairRot{1, Axis::X, th}, map);
  const ComplexMatrix minus = gate_unitary(QuditPairRot{1, Axis::X, -th}, map);
  for (int n : {0, 1, 2, 3}) {
    for (int k : {0, 1, 2, 3}) {
      const int up_r = map.hardware_index(n, true);
      const int up_c = map.hardware_index(k, true);
      const int dn_r = map.hardware_index(n, false);
      const int dn_c = map.hardware_index(k, false);
      CHECK(std::abs(cond(up_r, up_c) - plus(up_r, up_c)) < 1e-15);
      CHECK(std::abs(cond(dn_r, dn_c) - minus(dn_r, dn_c)) < 1e-15);
      CHECK(std::abs(cond(up_r, dn_c)) < 1e-15);
    }
  }

  const ComplexMatrix dp = gate_unitary(DiagonalPhase{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}}, map);
  CHECK(std::abs(dp(4, 4) - std::exp(-kI * 0.5)) < 1e-15);
  CHECK(is_diagonal(DiagonalPhase{}));
  CHECK_FALSE(is_diagonal(QubitRot{}));
  CHECK(pair_rotations(QubitRot{Axis::X, 0.3}, map).size() == 4);
  CHECK(pair_rotations(CondQuditPairRot{0, Axis::X, 0.3}, map).size() == 2);
  CHECK(pair_rotations(DiagonalPhase{std::vector<double>(8, 0.0)}, map).empty());
}

TEST_CASE("Trotter step matches the symmetric product formula") {
  const EncodingMap map(1.5, 0.5);
  for (double g : {0.0, 0.25, 0.7}) {
    RabiSpec s;
    s.G = g;
    const double tau = 0.37;
    const ComplexMatrix u = logical_block(circuit_unitary(compile_trotter_step(s, tau, map), map), map);
    CHECK(phase_insensitive_overlap(u, oracle_step(s, tau)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("merged and unmerged Trotter circuits implement the same unitary") {
  const EncodingMap map(1.5, 0.5);
  RabiSpec s;
  s.G = 0.5;
  for (int steps : {1, 3, 6}) {
    const Circuit merged = compile_trotter_circuit(s, 2.0, steps, map, true);
    const Circuit plain = compile_trotter_circuit(s, 2.0, steps, map, false);
    CHECK(merged.size() <= plain.size());
    const ComplexMatrix um = circuit_unitary(merged, map);
    const ComplexMatrix up = circuit_unitary(plain, map);
    CHECK(phase_insensitive_overlap(um, up) == doctest::Approx(1.0).epsilon(1e-12));
    ComplexMatrix oracle = identity(8);
    for (int k = 0; k < steps; ++k) oracle = oracle_step(s, 2.0 / steps) * oracle;
    CHECK(phase_insensitive_overlap(logical_block(um, map), oracle) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Trotter error shrinks with the number of steps") {
  const EncodingMap map(1.5, 0.5);
  RabiSpec s;
  s.G = 0.5;
  const double t = 5.0;
  const TargetState v = vacuum_state(4);
  const TargetState exact = exact_evolve(s, v, t);
  double prev = 1.0;
  for (int steps : {4, 8, 16}) {
    const TargetState psi = map.decode(circuit_unitary(compile_trotter_circuit(s, t, steps, map), map) * map.encode(v));
    const double err = std::sqrt(std::max(0.0, 1.0 - std::norm(exact.dot(psi))));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("VQE ansatz variants") {
  const EncodingMap map(1.5, 0.5);
  const std::vector<double> zero(4, 0.0);
  for (AnsatzVariant v : {AnsatzVariant::XConditioned, AnsatzVariant::ZConditioned}) {
    const ComplexMatrix u = circuit_unitary(build_vqe_ansatz(zero, map, v), map);
    CHECK(phase_insensitive_overlap(u, identity(8)) == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(build_vqe_ansatz(zero, map, AnsatzVariant::XConditioned).size() == 5);
  CHECK(build_vqe_ansatz(zero, map, AnsatzVariant::ZConditioned).size() == 4);
  CHECK(parse_ansatz_variant("z_conditioned") == AnsatzVariant::ZConditioned);
  CHECK(to_string(AnsatzVariant::XConditioned) == "x_conditioned");
  CHECK_THROWS_AS(parse_ansatz_variant("y"), ConfigError);
  CHECK_THROWS_AS(build_vqe_ansatz(std::vector<double>(3, 0.0), map), ConfigError);
  CHECK_THROWS_AS(build_vqe_ansatz(zero, EncodingMap(2.5, 0.5)), ConfigError);

  // The z-conditioned form has no coupling energy for real parameters.
  RabiSpec s;
  s.G = 0.6;
  const ComplexMatrix h = map.encode_operator(rabi_hamiltonian(s));
  const ComplexMatrix hc = map.encode_operator(rabi_hamiltonian(s) - rabi_hamiltonian(RabiSpec{}));
  const ComplexVector vac = map.encode(vacuum_state(4));
  const std::vector<double> th{0.4, -0.7, 0.3, 1.2};
  const ComplexVector pz = circuit_unitary(build_vqe_ansatz(th, map, AnsatzVariant::ZConditioned), map) * vac;
  CHECK(std::abs(pz.dot(hc * pz)) < 1e-14);
  const ComplexVector px = circuit_unitary(build_vqe_ansatz(th, map, AnsatzVariant::XConditioned), map) * vac;
  CHECK(std::abs(px.dot(hc * px)) > 1e-3);
  CHECK(px.dot(h * px).real() >= exact_ground_state(s).energy - 1e-12);
}
