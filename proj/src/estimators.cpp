#include "dlcfar/estimators.hpp"

#include <cmath>

namespace dlcfar {

namespace {

void require_regime(Eigen::Index n_eig, double lambda, int N, int K) {
  if (N < 1 || K <= N) throw DomainError("estimators: require K > N");
  if (n_eig != N) throw DomainError("estimators: spectrum dimension differs from N");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("estimators: lambda must be finite and >= 0");
}

}  // namespace

EstimatedEquivalents estimate_equivalents(const SpectralWeights& scm, double lambda, int N, int K) {
  const RVector& l = scm.eigenvalues;
  const RVector& w = scm.weights;
  require_regime(l.size(), lambda, N, K);
  if (lambda == 0.0 && !(l.minCoeff() > 0.0)) throw NumericalError("estimators: singular SCM at lambda = 0");

  const double c = static_cast<double>(N) / K;
  const auto inv = (l.array() + lambda).inverse();
  EstimatedEquivalents e;
  e.lambda = lambda;
  e.d1 = 1.0 - c + lambda / K * inv.sum();
  e.d2 = 1.0 - c + lambda * lambda / K * inv.square().sum();
  e.psi_hat = (w.array() * inv).sum();
  e.quad_resolvent = (w.array() * l.array() * inv.square()).sum();
  e.gamma_hat = 1.0 - e.d1 * e.d1 / e.d2;
  e.xi_hat = e.quad_resolvent / e.d2;
  e.mu0_hat = e.quad_resolvent / (e.d1 * e.d1);
  e.kappa_lower_hat = e.d1 * e.d1 * e.psi_hat * e.psi_hat / e.quad_resolvent;
  return e;
}

EstimatedEquivalents estimate_equivalents(const HermitianSpectrum& scm, const SteeringVector& s, double lambda,
                                          int N, int K) {
  return estimate_equivalents(scm.weights(s.entries), lambda, N, K);
}

double mu0_hat(const HermitianSpectrum& scm, const SteeringVector& s, double lambda, int N, int K) {
  return estimate_equivalents(scm, s, lambda, N, K).mu0_hat;
}

double gamma_hat(const HermitianSpectrum& scm, double lambda, int N, int K) {
  const SpectralWeights sw{scm.eigenvalues(), RVector::Ones(scm.dim())};
  return estimate_equivalents(sw, lambda, N, K).gamma_hat;
}

XiPsi xi_psi_hat(const HermitianSpectrum& scm, const SteeringVector& s, double lambda, int N, int K) {
  const auto e = estimate_equivalents(scm, s, lambda, N, K);
  return {e.xi_hat, e.psi_hat};
}

double kappa_lower_hat(const HermitianSpectrum& scm, const SteeringVector& s, double lambda, int N, int K) {
  return estimate_equivalents(scm, s, lambda, N, K).kappa_lower_hat;
}

double kappa_lower_hat(const SpectralWeights& scm, double lambda, int N, int K) {
  return estimate_equivalents(scm, lambda, N, K).kappa_lower_hat;
}

double sample_delta(const RVector& l, double lambda, int N, int K) {
  require_regime(l.size(), lambda, N, K);
  return 1.0 - static_cast<double>(N) / K + lambda / K * (l.array() + lambda).inverse().sum();
}

double el_log_g(const RVector& l, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("el_log_g: lambda must be >= 0");
  // each term -ln(1 + u) + u/(1 + u) with u = lambda / l_i
  double sum = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    const double u = lambda / l(i);
    sum += -std::log1p(u) + u / (1.0 + u);
  }
  return sum;
}

double el_log_zeta_half(int N, int K) {
  if (N < 1 || K <= N) throw DomainError("el_log_zeta_half: require K > N");
  const double c = static_cast<double>(N) / K;
  return -N - (K - N) * std::log(1.0 - c);
}

double el_log_likelihood_ratio(const HermitianSpectrum& R, const CMatrix& M) {
  if (M.rows() != R.dim() || M.cols() != R.dim()) throw DomainError("el_log_likelihood_ratio: size mismatch");
  if (!(R.min_eigenvalue() > 0.0)) throw DomainError("el_log_likelihood_ratio: R must be positive definite");
  // whitened SCM R^-1/2 M R^-1/2 has the eigenvalues of R^-1 M
  const RVector inv_sqrt = R.eigenvalues().cwiseSqrt().cwiseInverse();
  const CMatrix W = R.eigenvectors() * inv_sqrt.asDiagonal() * R.eigenvectors().adjoint();
  const CMatrix white = W * M * W;
  const RVector e = Eigen::SelfAdjointEigenSolver<CMatrix>(0.5 * (white + white.adjoint()), Eigen::EigenvaluesOnly)
                        .eigenvalues();
  if (!(e.minCoeff() > 0.0)) throw DomainError("el_log_likelihood_ratio: SCM is singular");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) sum += std::log(e(i)) + 1.0 - e(i);
  return sum;
}

ElResult el_lambda(const RVector& l, int N, int K) {
  require_regime(l.size(), 0.0, N, K);
  if (!(l.minCoeff() > 0.0)) throw DomainError("el_lambda: SCM eigenvalues must be positive");
  ElResult r;
  r.log_zeta = el_log_zeta_half(N, K);
  if (r.log_zeta >= 0.0) {
    r.has_root = false;
    r.lambda = 0.0;
    r.log_g = 0.0;
    return r;
  }
  auto h = [&](double lam) {
    ++r.evaluations;
    return el_log_g(l, lam) - r.log_zeta;
  };

  double lo = 0.0;
  double hi = l.maxCoeff();
  double h_hi = h(hi);
  for (int it = 0; h_hi > 0.0; ++it) {
    if (it > 200) throw NumericalError("el_lambda: cannot bracket the root", h_hi);
    lo = hi;
    hi *= 2.0;
    h_hi = h(hi);
  }
  double mid = hi, h_mid = h_hi;
  for (int it = 0; it < 400; ++it) {
    mid = 0.5 * (lo + hi);
    h_mid = h(mid);
    if (std::abs(h_mid) < 1e-10) break;
    if (h_mid > 0.0) lo = mid; else hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  if (!(std::abs(h_mid) < 1e-10)) throw NumericalError("el_lambda: bisection stalled", h_mid);
  r.lambda = mid;
  r.log_g = h_mid + r.log_zeta;
  return r;
}

ElResult el_lambda(const HermitianSpectrum& scm, int N, int K) { return el_lambda(scm.eigenvalues(), N, K); }

double theta_residual(const RVector& l, double x, int N, int K, double theta) {
  const double c = static_cast<double>(N) / K;
  return theta * (1.0 - c + c / N * (1.0 + theta * l.array()).inverse().sum()) - x;
}

double solve_theta(const RVector& l, double x, int N, int K) {
  require_regime(l.size(), 0.0, N, K);
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("solve_theta: x must be finite and >= 0");
  if (x == 0.0) return 0.0;
  const double c = static_cast<double>(N) / K;
  const double tol = 1e-12 * std::max(1.0, x);

  // Residual is increasing, -x at 0 and >= 0 at x/(1-c). Newton inside the bracket.
  double lo = 0.0, hi = x / (1.0 - c);
  double theta = x;
  double f = theta_residual(l, x, N, K, theta);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(f) < tol) return theta;
    if (f > 0.0) hi = theta; else lo = theta;
    const double slope = 1.0 - c + c / N * (1.0 + theta * l.array()).inverse().square().sum();
    double next = theta - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    theta = next;
    f = theta_residual(l, x, N, K, theta);
  }
  if (std::abs(f) < tol) return theta;
  throw NumericalError("solve_theta: no convergence", f);
}

}  // namespace dlcfar
