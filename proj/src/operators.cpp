#include "quditsim/operators.hpp"

#include <cmath>

namespace quditsim {

bool is_valid_spin(double S) {
  if (!std::isfinite(S) || S < 0.0) return false;
  const double twice = 2.0 * S;
  return std::abs(twice - std::round(twice)) < 1e-12;
}

int spin_dim(double S) {
  if (!is_valid_spin(S)) {
    throw LinalgError("spin quantum number must satisfy 2S in {0,1,2,...}, got " +
                      std::to_string(S));
  }
  return static_cast<int>(std::lround(2.0 * S)) + 1;
}

SpinOperators spin_matrices(double S) {
  SpinOperators ops;
  ops.dim = spin_dim(S);
  ops.S = 0.5 * (ops.dim - 1);
  const int d = ops.dim;
  ops.m.resize(d);
  for (int k = 0; k < d; ++k) ops.m[k] = ops.S - k;

  ops.Sz = ComplexMatrix::Zero(d, d);
  ops.Splus = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) ops.Sz(k, k) = ops.m[k];
  // S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>; |m+1> sits one index lower.
  for (int k = 1; k < d; ++k) {
    const double m = ops.m[k];
    ops.Splus(k - 1, k) = std::sqrt(ops.S * (ops.S + 1.0) - m * (m + 1.0));
  }
  ops.Sminus = ops.Splus.adjoint();
  ops.Sx = 0.5 * (ops.Splus + ops.Sminus);
  ops.Sy = (ops.Splus - ops.Sminus) / (2.0 * kI);
  return ops;
}

BosonOperators boson_matrices(int d) {
  if (d < 2) {
    throw LinalgError("boson truncation dimension must be >= 2, got " + std::to_string(d));
  }
  BosonOperators ops;
  ops.d = d;
  ops.a = ComplexMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ops.adag = ops.a.adjoint();
  ops.n = ComplexMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) ops.n(n, n) = n;
  return ops;
}

}  // namespace quditsim
