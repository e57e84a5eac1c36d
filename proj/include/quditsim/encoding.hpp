#pragma once

#include "quditsim/errors.hpp"
#include "quditsim/linalg.hpp"
#include "quditsim/target.hpp"

#include <vector>

namespace quditsim {

/// Places the truncated boson on the qudit (n <-> m1 = n - S1, so n_max = 2 S1)
/// and the two-level atom on two consecutive qubit-carrier levels
/// (down/up <-> m2 = -1/2/+1/2 for s2 = 1/2 and m2 = 0/1 for s2 = 1).
/// Hardware levels use the labeled product ordering of SpinSystem.
class EncodingMap {
 public:
  EncodingMap(double S1, double s2);

  double S1() const { return S1_; }
  double s2() const { return s2_; }
  /// Boson truncation d = 2 S1 + 1.
  int d() const { return d_; }
  int qubit_dim() const { return qubit_dim_; }
  int hardware_dim() const { return d_ * qubit_dim_; }

  int hardware_index(int n, bool up) const;
  /// Computational hardware levels ordered like the target basis.
  const std::vector<int>& computational_levels() const { return computational_; }
  /// Hardware levels outside the encoding (m2 = -1 when s2 = 1).
  const std::vector<int>& leakage_levels() const { return leakage_; }

  /// m1 and m2 of a hardware level.
  double m1_of(int level) const;
  double m2_of(int level) const;

  ComplexVector encode(const TargetState& psi) const;
  TargetState decode(const ComplexVector& hw) const;
  /// Target-space operator embedded on the computational levels, zero on
  /// leakage levels.
  ComplexMatrix encode_operator(const ComplexMatrix& op) const;
  /// Density matrix block on the computational levels, in target ordering.
  ComplexMatrix project(const ComplexMatrix& rho_hw) const;

 private:
  double S1_;
  double s2_;
  int d_;
  int qubit_dim_;
  std::vector<int> computational_;
  std::vector<int> leakage_;
};

ComplexVector encode_state(const TargetState& psi, const EncodingMap& map);
TargetState decode_state(const ComplexVector& hw, const EncodingMap& map);

struct HardwareObservables {
  double photons = 0.0;  // <Sz1> + S1
  double sigma_z = 0.0;  // encoded atom <sz>
  double leakage = 0.0;  // population outside the computational levels
};

/// rho in the labeled hardware basis; trace must be 1 to 1e-8.
HardwareObservables measure_observables(const ComplexMatrix& rho, const EncodingMap& map);

}  // namespace quditsim
