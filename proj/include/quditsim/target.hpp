#pragma once

#include "quditsim/errors.hpp"
#include "quditsim/linalg.hpp"

#include <vector>

namespace quditsim {

/// Quantum Rabi model  H = w_a sz + W n + 2 G sx (a + a^dag)  with spin-1/2
/// operators (eigenvalues +-1/2) and a boson mode truncated to d levels.
/// Energies and time are in units of the photon energy W (W = 1, hbar = 1).
struct RabiSpec {
  double omega_a = 0.5;
  double Omega = 1.0;
  double G = 0.0;
  int d = 4;
};

void validate(const RabiSpec& spec);

/// Target basis: boson level n (slow index) x atom (up = 0, down = 1), i.e.
/// index = 2 n + (up ? 0 : 1), matching the descending-m spin convention.
using TargetState = ComplexVector;

inline int target_index(int n, bool up) { return 2 * n + (up ? 0 : 1); }

/// |n = 0, down>
TargetState vacuum_state(int d);

ComplexMatrix rabi_hamiltonian(const RabiSpec& spec);

/// Photon-number and atom operators on the target space.
ComplexMatrix target_photon_number(int d);
ComplexMatrix target_sigma_z(int d);
ComplexMatrix target_sigma_x(int d);
/// sz-parity (x) (-1)^n; commutes with the Rabi Hamiltonian.
ComplexMatrix target_parity(int d);

struct GroundState {
  double energy = 0.0;
  TargetState state;
};

GroundState exact_ground_state(const RabiSpec& spec);

/// Caches the eigendecomposition so repeated evolutions over a time grid cost
/// one matrix-vector product each.
class ExactPropagator {
 public:
  explicit ExactPropagator(const RabiSpec& spec);
  TargetState evolve(const TargetState& psi0, double t) const;
  const RabiSpec& spec() const { return spec_; }

 private:
  RabiSpec spec_;
  EigenDecomposition eig_;
};

TargetState exact_evolve(const RabiSpec& spec, const TargetState& psi0, double t);

struct TargetObservables {
  double photons = 0.0;   // <a^dag a>
  double sigma_z = 0.0;   // <sz>, in [-1/2, 1/2]
};

TargetObservables target_observables(const TargetState& psi);

struct TruncationError {
  double photons = 0.0;  // max_t |<n>_d - <n>_dref|
  double sigma_z = 0.0;  // max_t |<sz>_d - <sz>_dref|
};

/// Compares vacuum-state dynamics at spec.d against a larger truncation.
TruncationError truncation_error(const RabiSpec& spec, int d_ref, const std::vector<double>& t_grid);

/// Default dynamics grid t = 0.5, 1.0, ..., 10.0 (units of 1/W).
std::vector<double> default_time_grid();

}  // namespace quditsim
