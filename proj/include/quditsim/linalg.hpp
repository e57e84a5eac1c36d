#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace quditsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a matrix violates a structural precondition (Hermiticity,
/// shape, normalization).
class LinalgError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

/// max |A - A^dagger| over all entries.
double hermiticity_defect(const ComplexMatrix& a);
/// max |U^dagger U - I| over all entries.
double unitarity_defect(const ComplexMatrix& u);

/// Hermiticity check with the tolerance scaled by max(1, max|A_ij|), so that
/// Hamiltonians in GHz with entries of order 10-100 are judged fairly.
bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& u, double tol = kUnitaryTol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix identity(Eigen::Index dim);

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns
};

EigenDecomposition eig_hermitian(const ComplexMatrix& h);

/// e^{-i H t} via eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t);
ComplexMatrix expm_hermitian(const EigenDecomposition& eig, double t);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const ComplexMatrix& rho);

}  // namespace quditsim
