#pragma once

#include "quditsim/linalg.hpp"

#include <vector>

namespace quditsim {

/// Angular momentum matrices for spin S in the |S,m> basis ordered by
/// descending m (index 0 is m = S).
struct SpinOperators {
  double S = 0.0;
  int dim = 0;
  std::vector<double> m;  // m[k] = S - k
  ComplexMatrix Sx, Sy, Sz, Splus, Sminus;
};

/// Truncated single-mode boson operators on Fock levels 0..d-1.
struct BosonOperators {
  int d = 0;
  ComplexMatrix a, adag, n;
};

/// Returns true when 2S is a non-negative integer.
bool is_valid_spin(double S);
int spin_dim(double S);

SpinOperators spin_matrices(double S);
BosonOperators boson_matrices(int d);

}  // namespace quditsim
