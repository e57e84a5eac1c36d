#include <doctest.h>

#include "quditsim/operators.hpp"
#include "quditsim/target.hpp"

#include <cmath>

using namespace quditsim;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Rabi Hamiltonian assembled from boson (x) spin-1/2 factors.
ComplexMatrix oracle_rabi(const RabiSpec& s) {
  const BosonOperators b = boson_matrices(s.d);
  const SpinOperators a = spin_matrices(0.5);
  return s.omega_a * kron(identity(s.d), a.Sz) + s.Omega * kron(b.n, identity(2)) +
         2.0 * s.G * kron(b.a + b.adag, a.Sx);
}

}  // namespace

TEST_CASE("Rabi Hamiltonian matches the tensor-product oracle") {
  for (double g : {0.0, 0.25, 0.7}) {
    RabiSpec s;
    s.G = g;
    s.d = 6;
    CHECK(max_abs(rabi_hamiltonian(s) - oracle_rabi(s)) < 1e-14);
  }
  CHECK(target_index(0, true) == 0);
  CHECK(target_index(0, false) == 1);
  CHECK(target_index(3, false) == 7);
}

TEST_CASE("ground state without coupling") {
  RabiSpec s;
  const GroundState gs = exact_ground_state(s);
  CHECK(gs.energy == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(std::abs(std::abs(gs.state(target_index(0, false))) - 1.0) < 1e-12);
  const TargetObservables obs = target_observables(gs.state);
  CHECK(obs.photons == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(obs.sigma_z == doctest::Approx(-0.5));
}

TEST_CASE("weak coupling follows second-order perturbation theory") {
  // |0,down> couples only to |1,up> with matrix element G; the gap is W + w_a.
  for (double g : {0.01, 0.03, 0.05}) {
    RabiSpec s;
    s.G = g;
    s.d = 8;
    const double e2 = -0.25 - g * g / 1.5;
    CHECK(std::abs(exact_ground_state(s).energy - e2) < 2.0 * std::pow(g, 4));
  }
}

TEST_CASE("parity commutes with the Rabi Hamiltonian") {
  RabiSpec s;
  s.G = 0.8;
  s.d = 5;
  const ComplexMatrix p = target_parity(s.d);
  CHECK(max_abs(commutator(p, rabi_hamiltonian(s))) < 1e-13);
  CHECK(max_abs(p * p - identity(2 * s.d)) < 1e-14);
}

TEST_CASE("exact propagation is unitary and agrees with expm") {
  RabiSpec s;
  s.G = 0.5;
  s.d = 4;
  const ExactPropagator prop(s);
  const TargetState v = vacuum_state(s.d);
  for (double t : {0.5, 3.0, 10.0}) {
    const TargetState psi = prop.evolve(v, t);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const TargetState oracle = expm_hermitian(oracle_rabi(s), t) * v;
    CHECK((psi - oracle).norm() < 1e-11);
    CHECK((exact_evolve(s, v, t) - oracle).norm() < 1e-11);
  }
}

TEST_CASE("truncation error shrinks with d") {
  RabiSpec s;
  s.G = 0.25;
  s.d = 4;
  const auto grid = default_time_grid();
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == doctest::Approx(0.5));
  CHECK(grid.back() == doctest::Approx(10.0));
  const TruncationError e4 = truncation_error(s, 30, grid);
  s.d = 8;
  const TruncationError e8 = truncation_error(s, 30, grid);
  CHECK(e8.photons < e4.photons);
  CHECK(e8.sigma_z < e4.sigma_z);
}

TEST_CASE("target validation") {
  RabiSpec s;
  s.d = 1;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = RabiSpec{};
  s.G = -0.1;
  CHECK_THROWS_AS(validate(s), ConfigError);
}
