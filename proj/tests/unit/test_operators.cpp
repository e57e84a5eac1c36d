#include <doctest.h>

#include "quditsim/linalg.hpp"
#include "quditsim/operators.hpp"

#include <cmath>

using namespace quditsim;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spin matrices obey the angular momentum algebra") {
  for (double S : {0.5, 1.0, 1.5, 2.0, 2.5, 3.5}) {
    CAPTURE(S);
    const SpinOperators s = spin_matrices(S);
    REQUIRE(s.dim == static_cast<int>(2 * S + 1));
    CHECK(max_abs(commutator(s.Sx, s.Sy) - kI * s.Sz) < 1e-12);
    CHECK(max_abs(commutator(s.Sy, s.Sz) - kI * s.Sx) < 1e-12);
    CHECK(max_abs(commutator(s.Sz, s.Sx) - kI * s.Sy) < 1e-12);
    const ComplexMatrix casimir = s.Sx * s.Sx + s.Sy * s.Sy + s.Sz * s.Sz;
    CHECK(max_abs(casimir - S * (S + 1.0) * identity(s.dim)) < 1e-12);
    CHECK(max_abs(s.Splus - (s.Sx + kI * s.Sy)) < 1e-12);
    CHECK(max_abs(s.Sminus - s.Splus.adjoint()) < 1e-12);
  }
}

TEST_CASE("spin basis is ordered by descending m") {
  const SpinOperators s = spin_matrices(1.5);
  for (int k = 0; k < s.dim; ++k) {
    CHECK(s.m[k] == doctest::Approx(1.5 - k));
    CHECK(s.Sz(k, k).real() == doctest::Approx(s.m[k]));
  }
  // <m+1|S+|m> = sqrt(S(S+1) - m(m+1)); m+1 sits one index above m.
  for (int k = 1; k < s.dim; ++k) {
    const double m = s.m[k];
    CHECK(std::abs(s.Splus(k - 1, k) - std::sqrt(1.5 * 2.5 - m * (m + 1.0))) < 1e-12);
  }
}

TEST_CASE("truncated boson operators") {
  for (int d : {2, 4, 6, 30}) {
    CAPTURE(d);
    const BosonOperators b = boson_matrices(d);
    for (int n = 0; n + 1 < d; ++n) CHECK(std::abs(b.a(n, n + 1) - std::sqrt(n + 1.0)) < 1e-12);
    for (int n = 0; n < d; ++n) CHECK(b.n(n, n).real() == doctest::Approx(n));
    CHECK(max_abs(b.n - b.adag * b.a) < 1e-12);
    // [a, a^dag] = 1 except on the last level, where it is 1 - d.
    ComplexMatrix expected = identity(d);
    expected(d - 1, d - 1) = 1.0 - d;
    CHECK(max_abs(commutator(b.a, b.adag) - expected) < 1e-12);
  }
}

TEST_CASE("invalid spins are rejected") {
  CHECK(is_valid_spin(1.5));
  CHECK_FALSE(is_valid_spin(0.7));
  CHECK_FALSE(is_valid_spin(-1.0));
  CHECK_THROWS_AS(spin_matrices(0.3), LinalgError);
  CHECK_THROWS_AS(boson_matrices(0), LinalgError);
}

TEST_CASE("kron and expm") {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const ComplexMatrix k = kron(x, identity(3));
  CHECK(k.rows() == 6);
  CHECK(std::abs(k(0, 3) - 1.0) < 1e-15);
  CHECK(std::abs(k(3, 0) - 1.0) < 1e-15);
  CHECK(std::abs(k(0, 1)) < 1e-15);

  // e^{-i x t} = cos t - i x sin t
  const double t = 0.731;
  const ComplexMatrix u = expm_hermitian(x, t);
  const ComplexMatrix oracle = std::cos(t) * identity(2) - kI * std::sin(t) * x;
  CHECK(max_abs(u - oracle) < 1e-14);
  CHECK(is_unitary(u));

  ComplexMatrix bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_FALSE(is_hermitian(bad));
  CHECK_THROWS_AS(eig_hermitian(bad), LinalgError);
}

TEST_CASE("min_eigenvalue of a mixed state") {
  ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
  rho(0, 0) = 0.7;
  rho(1, 1) = 0.3;
  CHECK(min_eigenvalue(rho) == doctest::Approx(0.0).epsilon(1e-14));
  rho(2, 2) = -0.1;
  CHECK(min_eigenvalue(rho) == doctest::Approx(-0.1));
}
