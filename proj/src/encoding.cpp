#include "quditsim/encoding.hpp"

#include "quditsim/operators.hpp"

#include <cmath>

namespace quditsim {

EncodingMap::EncodingMap(double S1, double s2) : S1_(S1), s2_(s2) {
  if (!is_valid_spin(S1) || S1 < 1.5) throw ConfigError("encoding: S1 must be >= 3/2");
  if (!(s2 == 0.5 || s2 == 1.0)) throw ConfigError("encoding: s2 must be 1/2 or 1");
  d_ = spin_dim(S1);
  qubit_dim_ = spin_dim(s2);
  for (int n = 0; n < d_; ++n) {
    computational_.push_back(hardware_index(n, true));
    computational_.push_back(hardware_index(n, false));
    if (qubit_dim_ == 3) leakage_.push_back((d_ - 1 - n) * qubit_dim_ + 2);
  }
}

int EncodingMap::hardware_index(int n, bool up) const {
  if (n < 0 || n >= d_) throw ConfigError("encoding: boson level out of range");
  // Qudit index counts down from m1 = S1; qubit index 0 is the highest m2.
  const int qudit = d_ - 1 - n;
  const int qubit = up ? 0 : 1;
  return qudit * qubit_dim_ + qubit;
}

double EncodingMap::m1_of(int level) const { return S1_ - level / qubit_dim_; }

double EncodingMap::m2_of(int level) const { return s2_ - level % qubit_dim_; }

ComplexVector EncodingMap::encode(const TargetState& psi) const {
  if (psi.size() != 2 * d_) throw ConfigError("encode: target state has wrong dimension");
  ComplexVector hw = ComplexVector::Zero(hardware_dim());
  for (int k = 0; k < 2 * d_; ++k) hw(computational_[k]) = psi(k);
  return hw;
}

TargetState EncodingMap::decode(const ComplexVector& hw) const {
  if (hw.size() != hardware_dim()) throw ConfigError("decode: hardware state has wrong dimension");
  TargetState psi(2 * d_);
  for (int k = 0; k < 2 * d_; ++k) psi(k) = hw(computational_[k]);
  return psi;
}

ComplexMatrix EncodingMap::encode_operator(const ComplexMatrix& op) const {
  if (op.rows() != 2 * d_ || op.cols() != 2 * d_) {
    throw ConfigError("encode_operator: operator has wrong dimension");
  }
  ComplexMatrix out = ComplexMatrix::Zero(hardware_dim(), hardware_dim());
  for (int i = 0; i < 2 * d_; ++i)
    for (int j = 0; j < 2 * d_; ++j) out(computational_[i], computational_[j]) = op(i, j);
  return out;
}

ComplexMatrix EncodingMap::project(const ComplexMatrix& rho_hw) const {
  ComplexMatrix out(2 * d_, 2 * d_);
  for (int i = 0; i < 2 * d_; ++i)
    for (int j = 0; j < 2 * d_; ++j) out(i, j) = rho_hw(computational_[i], computational_[j]);
  return out;
}

ComplexVector encode_state(const TargetState& psi, const EncodingMap& map) { return map.encode(psi); }

TargetState decode_state(const ComplexVector& hw, const EncodingMap& map) { return map.decode(hw); }

HardwareObservables measure_observables(const ComplexMatrix& rho, const EncodingMap& map) {
  if (rho.rows() != map.hardware_dim() || rho.cols() != map.hardware_dim()) {
    throw ConfigError("measure_observables: density matrix has wrong dimension");
  }
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-8) {
    throw ConfigError("measure_observables: trace(rho) = " + std::to_string(tr) + " is not 1");
  }
  HardwareObservables obs;
  for (int k = 0; k < map.hardware_dim(); ++k) {
    obs.photons += rho(k, k).real() * (map.m1_of(k) + map.S1());
  }
  for (int n = 0; n < map.d(); ++n) {
    obs.sigma_z += 0.5 * (rho(map.hardware_index(n, true), map.hardware_index(n, true)).real() -
                          rho(map.hardware_index(n, false), map.hardware_index(n, false)).real());
  }
  for (int k : map.leakage_levels()) obs.leakage += rho(k, k).real();
  return obs;
}

}  // namespace quditsim
