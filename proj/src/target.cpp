#include "quditsim/target.hpp"

#include "quditsim/operators.hpp"

#include <algorithm>
#include <cmath>

namespace quditsim {

void validate(const RabiSpec& spec) {
  if (spec.d < 2) throw ConfigError("rabi: truncation dimension d must be >= 2");
  if (!(spec.G >= 0.0)) throw ConfigError("rabi: coupling G must be >= 0");
  if (!std::isfinite(spec.omega_a) || !std::isfinite(spec.Omega) || !std::isfinite(spec.G)) {
    throw ConfigError("rabi: non-finite parameter");
  }
}

TargetState vacuum_state(int d) {
  TargetState psi = TargetState::Zero(2 * d);
  psi(target_index(0, false)) = 1.0;
  return psi;
}

ComplexMatrix target_photon_number(int d) {
  return kron(boson_matrices(d).n, identity(2));
}

ComplexMatrix target_sigma_z(int d) {
  return kron(identity(d), spin_matrices(0.5).Sz);
}

ComplexMatrix target_sigma_x(int d) {
  return kron(identity(d), spin_matrices(0.5).Sx);
}

ComplexMatrix target_parity(int d) {
  ComplexMatrix p = ComplexMatrix::Zero(2 * d, 2 * d);
  for (int n = 0; n < d; ++n) {
    const double boson = (n % 2 == 0) ? 1.0 : -1.0;
    p(target_index(n, true), target_index(n, true)) = boson;
    p(target_index(n, false), target_index(n, false)) = -boson;
  }
  return p;
}

ComplexMatrix rabi_hamiltonian(const RabiSpec& spec) {
  validate(spec);
  const BosonOperators b = boson_matrices(spec.d);
  const SpinOperators s = spin_matrices(0.5);
  const ComplexMatrix i_b = identity(spec.d);
  const ComplexMatrix i_s = identity(2);
  return spec.omega_a * kron(i_b, s.Sz) + spec.Omega * kron(b.n, i_s) +
         2.0 * spec.G * kron(b.a + b.adag, s.Sx);
}

GroundState exact_ground_state(const RabiSpec& spec) {
  const EigenDecomposition eig = eig_hermitian(rabi_hamiltonian(spec));
  GroundState gs;
  gs.energy = eig.values(0);
  gs.state = eig.vectors.col(0);
  // Fix the global phase: largest component real positive.
  Eigen::Index k = 0;
  gs.state.cwiseAbs().maxCoeff(&k);
  gs.state *= std::conj(gs.state(k)) / std::abs(gs.state(k));
  return gs;
}

ExactPropagator::ExactPropagator(const RabiSpec& spec)
    : spec_(spec), eig_(eig_hermitian(rabi_hamiltonian(spec))) {}

TargetState ExactPropagator::evolve(const TargetState& psi0, double t) const {
  if (psi0.size() != eig_.values.size()) {
    throw ConfigError("exact_evolve: state dimension does not match 2d");
  }
  ComplexVector coeff = eig_.vectors.adjoint() * psi0;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) {
    coeff(k) *= std::polar(1.0, -eig_.values(k) * t);
  }
  return eig_.vectors * coeff;
}

TargetState exact_evolve(const RabiSpec& spec, const TargetState& psi0, double t) {
  return ExactPropagator(spec).evolve(psi0, t);
}

TargetObservables target_observables(const TargetState& psi) {
  TargetObservables obs;
  const int d = static_cast<int>(psi.size() / 2);
  for (int n = 0; n < d; ++n) {
    const double up = std::norm(psi(target_index(n, true)));
    const double down = std::norm(psi(target_index(n, false)));
    obs.photons += n * (up + down);
    obs.sigma_z += 0.5 * (up - down);
  }
  return obs;
}

TruncationError truncation_error(const RabiSpec& spec, int d_ref, const std::vector<double>& t_grid) {
  validate(spec);
  if (d_ref <= spec.d) throw ConfigError("truncation_error: d_ref must exceed d");
  RabiSpec ref = spec;
  ref.d = d_ref;
  const ExactPropagator small(spec);
  const ExactPropagator large(ref);
  const TargetState v_small = vacuum_state(spec.d);
  const TargetState v_large = vacuum_state(d_ref);
  TruncationError err;
  for (double t : t_grid) {
    const TargetObservables a = target_observables(small.evolve(v_small, t));
    const TargetObservables b = target_observables(large.evolve(v_large, t));
    err.photons = std::max(err.photons, std::abs(a.photons - b.photons));
    err.sigma_z = std::max(err.sigma_z, std::abs(a.sigma_z - b.sigma_z));
  }
  return err;
}

std::vector<double> default_time_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.5 * k);
  return grid;
}

}  // namespace quditsim
