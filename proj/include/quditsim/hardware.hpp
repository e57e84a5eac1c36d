#pragma once

#include "quditsim/errors.hpp"
#include "quditsim/linalg.hpp"
#include "quditsim/operators.hpp"

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quditsim {

namespace units {
/// 1 cm^-1 expressed as a frequency (c is exact).
inline constexpr double kGHzPerWavenumber = 29.9792458;
/// mu_B / h.
inline constexpr double kBohrMagnetonGHzPerTesla = 13.9962449;
}  // namespace units

inline constexpr double kInfiniteT2 = std::numeric_limits<double>::infinity();

/// Parameters of the qudit (S1) + qubit carrier (s2) dimer.
/// Energies are entered in cm^-1, the field in tesla and T2 in microseconds.
struct HardwareSpec {
  double S1 = 1.5;
  double s2 = 0.5;
  double g1 = 1.98;
  double g2 = 2.3;
  double B = 0.4;
  double D = 0.24;
  double Dprime = 0.0;
  double Jx = 0.008;
  double Jy = 0.008;
  double Jz = -0.016;
  double T2 = kInfiniteT2;
  std::optional<double> T2_qubit;  // defaults to T2

  double qudit_T2() const { return T2; }
  double qubit_T2() const { return T2_qubit.value_or(T2); }
};

/// Throws ConfigError when S1 < 3/2, s2 not in {1/2, 1}, or T2 <= 0.
void validate(const HardwareSpec& spec);

/// Sets Jx = Jy = jxy and Jz = -2 jxy (point-dipole axial coupling).
HardwareSpec with_axial_dipolar_coupling(HardwareSpec spec, double jxy);

/// Single-ion parameters for the supported transition-metal ions.
struct IonPreset {
  std::string name;
  double spin = 0.0;
  double g = 2.0;
  double D = 0.0;  // cm^-1, axial zero-field splitting of this ion
};

/// name in {Cr, Fe, Cu, Ni}; throws ConfigError otherwise.
IonPreset ion_preset(std::string_view name);

/// Product-basis Hamiltonian in GHz. Qudit factor first, spin basis ordered
/// by descending m.
ComplexMatrix build_hardware_hamiltonian(const HardwareSpec& spec);

struct ProductLabel {
  double m1 = 0.0;
  double m2 = 0.0;
};

struct LevelInfo {
  double energy_ghz = 0.0;
  ProductLabel label;
  int product_index = 0;
  double overlap = 1.0;  // |<m1 m2|psi>|^2 of the dominant product state
};

inline constexpr double kFactorizationThreshold = 0.9;

struct LevelTable {
  std::vector<LevelInfo> levels;  // ascending energy
  double min_overlap = 1.0;
  bool factorization_warning = false;  // min_overlap < kFactorizationThreshold
};

struct Transition {
  ProductLabel from;  // lower-energy state
  ProductLabel to;
  int from_level = 0;  // product/label index
  int to_level = 0;
  double frequency_ghz = 0.0;
  Complex matrix_element;  // <to| g1 Sx1 + g2 sx2 |from>
  bool qudit_line = false;  // true for dm1 = +-1, false for dm2 = +-1
};

struct TransitionTable {
  std::vector<Transition> lines;

  /// Line connecting two labeled levels (either order), or nullptr.
  const Transition* find(int level_a, int level_b) const;
};

LevelTable level_table(const ComplexMatrix& h, const HardwareSpec& spec);
TransitionTable transition_table(const ComplexMatrix& h, const HardwareSpec& spec);

/// Diagonalized hardware with every eigenstate labeled by its dominant product
/// state. All operators are expressed in the labeled eigenbasis, where index k
/// is the eigenstate whose dominant component is product state k.
class SpinSystem {
 public:
  explicit SpinSystem(const HardwareSpec& spec);

  const HardwareSpec& spec() const { return spec_; }
  int dim() const { return dim1_ * dim2_; }
  int qudit_dim() const { return dim1_; }
  int qubit_dim() const { return dim2_; }

  /// Eigen-energies in GHz, indexed by label.
  const RealVector& energies() const { return energies_; }
  /// Columns are eigenvectors in the product basis, column k labeled k.
  const ComplexMatrix& eigenvectors() const { return w_; }
  ProductLabel label(int k) const;
  double total_m(int k) const;

  const ComplexMatrix& product_hamiltonian() const { return h_product_; }
  /// g1 Sx1 + g2 sx2
  const ComplexMatrix& drive() const { return drive_; }
  /// (g1 S1+ + g2 s2+) / 2, the M-raising half of the drive.
  const ComplexMatrix& drive_raising() const { return drive_raising_; }
  const ComplexMatrix& sz1() const { return sz1_; }
  const ComplexMatrix& sz2() const { return sz2_; }

  /// True when H0 commutes with Sz1 + sz2 (Jx == Jy); required by the
  /// rotating-frame backend.
  bool conserves_total_m() const { return conserves_m_; }

  const LevelTable& levels() const { return levels_; }
  const TransitionTable& transitions() const { return transitions_; }

  /// Converts a labeled-basis operator to the product basis and back.
  ComplexMatrix to_product(const ComplexMatrix& op) const;
  ComplexMatrix from_product(const ComplexMatrix& op) const;

 private:
  HardwareSpec spec_;
  int dim1_ = 0;
  int dim2_ = 0;
  std::vector<double> m1_, m2_;
  ComplexMatrix h_product_;
  RealVector energies_;
  ComplexMatrix w_;
  ComplexMatrix drive_, drive_raising_, sz1_, sz2_;
  bool conserves_m_ = false;
  LevelTable levels_;
  TransitionTable transitions_;
};

}  // namespace quditsim
