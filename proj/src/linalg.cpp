#include "quditsim/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace quditsim {

namespace {

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw LinalgError(std::string(what) + ": expected a non-empty square matrix");
  }
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a, "hermiticity_defect");
  return max_abs(a - a.adjoint());
}

double unitarity_defect(const ComplexMatrix& u) {
  require_square(u, "unitarity_defect");
  return max_abs(u.adjoint() * u - identity(u.rows()));
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  return hermiticity_defect(a) <= tol * std::max(1.0, max_abs(a));
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  return unitarity_defect(u) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

EigenDecomposition eig_hermitian(const ComplexMatrix& h) {
  require_square(h, "eig_hermitian");
  if (!is_hermitian(h)) {
    throw LinalgError("eig_hermitian: matrix is not Hermitian (defect " +
                      std::to_string(hermiticity_defect(h)) + ")");
  }
  // Symmetrize so roundoff in the lower triangle cannot leak into the result.
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw LinalgError("eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm_hermitian(const EigenDecomposition& eig, double t) {
  const Eigen::Index n = eig.values.size();
  ComplexVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::polar(1.0, -eig.values(k) * t);
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  if (t == 0.0) {
    require_square(h, "expm_hermitian");
    if (!is_hermitian(h)) throw LinalgError("expm_hermitian: matrix is not Hermitian");
    return identity(h.rows());
  }
  return expm_hermitian(eig_hermitian(h), t);
}

double min_eigenvalue(const ComplexMatrix& rho) {
  require_square(rho, "min_eigenvalue");
  const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace quditsim
