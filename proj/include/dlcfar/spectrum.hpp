#pragma once

#include "dlcfar/types.hpp"

namespace dlcfar {

// Eigenvalues paired with squared projections |v_i^H s|^2 of a fixed vector.
// Every resolvent functional s^H f(M) s and tr f(M) reduces to sums over these.
struct SpectralWeights {
  RVector eigenvalues;
  RVector weights;
};

// Hermitian matrix held together with its eigendecomposition. Immutable after
// construction; safe to share across threads.
class HermitianSpectrum {
 public:
  enum class Floor {
    // Covariance models: eigenvalues below 1e-12 * max are raised to that floor.
    kRelativeClamp,
    // Sample covariances: tiny negative round-off is set to zero, nothing else.
    kSemidefinite,
  };

  static constexpr double kRelativeFloor = 1e-12;

  explicit HermitianSpectrum(const CMatrix& m, Floor floor = Floor::kRelativeClamp);

  Eigen::Index dim() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }
  // Ascending.
  const RVector& eigenvalues() const { return eigenvalues_; }
  const CMatrix& eigenvectors() const { return eigenvectors_; }

  double min_eigenvalue() const { return eigenvalues_(0); }
  double max_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }
  double mean_eigenvalue() const { return eigenvalues_.mean(); }
  // Infinite for singular matrices.
  double condition_number() const;
  int clamped_count() const { return clamped_; }

  // V^H v
  CVector project(const CVector& v) const { return eigenvectors_.adjoint() * v; }
  SpectralWeights weights(const CVector& s) const;

  // V diag(rho)^{1/2} V^H
  CMatrix sqrt() const;
  CMatrix reconstruct() const;

  double quad(const CVector& s) const;          // s^H M s
  double quad_inverse(const CVector& s) const;  // s^H M^{-1} s
  double trace_inverse() const;

 private:
  void require_invertible() const;

  CMatrix matrix_;
  RVector eigenvalues_;
  CMatrix eigenvectors_;
  int clamped_ = 0;
};

}  // namespace dlcfar
