#include "dlcfar/spectrum.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace dlcfar {

HermitianSpectrum::HermitianSpectrum(const CMatrix& m, Floor floor) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DomainError("HermitianSpectrum: matrix must be square and non-empty");
  }
  const double norm = m.norm();
  if ((m - m.adjoint()).norm() > 1e-10 * std::max(norm, 1.0)) {
    throw DomainError("HermitianSpectrum: matrix is not Hermitian");
  }
  matrix_ = 0.5 * (m + m.adjoint());

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("HermitianSpectrum: eigendecomposition failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();

  const double top = eigenvalues_.maxCoeff();
  if (floor == Floor::kRelativeClamp) {
    if (top <= 0.0) {
      throw ModelError("HermitianSpectrum: matrix has no positive eigenvalue");
    }
    const double lo = kRelativeFloor * top;
    for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
      if (eigenvalues_(i) < lo) {
        eigenvalues_(i) = lo;
        ++clamped_;
      }
    }
    if (clamped_ > 0) {
      std::clog << "warning: " << clamped_ << " eigenvalue(s) clamped to " << lo << '\n';
    }
  } else {
    for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
      if (eigenvalues_(i) < 0.0) eigenvalues_(i) = 0.0;
    }
  }
}

double HermitianSpectrum::condition_number() const {
  if (min_eigenvalue() <= 0.0) return std::numeric_limits<double>::infinity();
  return max_eigenvalue() / min_eigenvalue();
}

SpectralWeights HermitianSpectrum::weights(const CVector& s) const {
  if (s.size() != dim()) throw DomainError("weights: dimension mismatch");
  return {eigenvalues_, project(s).cwiseAbs2()};
}

CMatrix HermitianSpectrum::sqrt() const {
  return eigenvectors_ * eigenvalues_.cwiseSqrt().asDiagonal() * eigenvectors_.adjoint();
}

CMatrix HermitianSpectrum::reconstruct() const {
  return eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.adjoint();
}

double HermitianSpectrum::quad(const CVector& s) const {
  return (weights(s).weights.array() * eigenvalues_.array()).sum();
}

double HermitianSpectrum::quad_inverse(const CVector& s) const {
  require_invertible();
  return (weights(s).weights.array() / eigenvalues_.array()).sum();
}

double HermitianSpectrum::trace_inverse() const {
  require_invertible();
  return eigenvalues_.cwiseInverse().sum();
}

void HermitianSpectrum::require_invertible() const {
  if (!(min_eigenvalue() > 0.0)) {
    throw NumericalError("HermitianSpectrum: matrix is singular");
  }
}

}  // namespace dlcfar
