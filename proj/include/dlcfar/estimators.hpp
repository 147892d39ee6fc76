#pragma once

#include "dlcfar/scenario.hpp"
#include "dlcfar/spectrum.hpp"

namespace dlcfar {

// Consistent estimates from the SCM at one loading factor. All functionals of
// (R_hat + lambda I)^-1 are sums over the SCM spectrum and projected weights.
struct EstimatedEquivalents {
  double lambda = 0.0;
  double mu0_hat = 0.0;
  double gamma_hat = 0.0;
  double xi_hat = 0.0;
  double psi_hat = 0.0;
  double kappa_lower_hat = 0.0;
  // 1 - c + (lambda/K) tr(R_hat + lambda)^-1, the sample counterpart of delta
  double d1 = 0.0;
  // 1 - c + (lambda^2/K) tr(R_hat + lambda)^-2
  double d2 = 0.0;
  // s^H (R_hat + lambda)^-1 R_hat (R_hat + lambda)^-1 s
  double quad_resolvent = 0.0;
};

EstimatedEquivalents estimate_equivalents(const SpectralWeights& scm, double lambda, int N, int K);
EstimatedEquivalents estimate_equivalents(const HermitianSpectrum& scm, const SteeringVector& s, double lambda,
                                          int N, int K);

double mu0_hat(const HermitianSpectrum& scm, const SteeringVector& s, double lambda, int N, int K);
double gamma_hat(const HermitianSpectrum& scm, double lambda, int N, int K);
struct XiPsi {
  double xi_hat;
  double psi_hat;
};
XiPsi xi_psi_hat(const HermitianSpectrum& scm, const SteeringVector& s, double lambda, int N, int K);
double kappa_lower_hat(const HermitianSpectrum& scm, const SteeringVector& s, double lambda, int N, int K);
double kappa_lower_hat(const SpectralWeights& scm, double lambda, int N, int K);

double sample_delta(const RVector& scm_eigenvalues, double lambda, int N, int K);

// Expected-likelihood loading. log g(lambda) = sum ln(l_i/(l_i+lambda)) + N - sum l_i/(l_i+lambda).
double el_log_g(const RVector& scm_eigenvalues, double lambda);
// log of e^{-N} (1-c)^{-(K-N)}
double el_log_zeta_half(int N, int K);

// log of det(R^-1 M) exp(N - tr(R^-1 M)), the likelihood ratio of covariance R on data with SCM M.
double el_log_likelihood_ratio(const HermitianSpectrum& R, const CMatrix& M);

struct ElResult {
  double lambda = 0.0;
  double log_g = 0.0;
  double log_zeta = 0.0;
  bool has_root = true;
  int evaluations = 0;
};
ElResult el_lambda(const RVector& scm_eigenvalues, int N, int K);
ElResult el_lambda(const HermitianSpectrum& scm, int N, int K);

// theta * (1 - c + (c/N) sum 1/(1 + theta l_i)) = x
double solve_theta(const RVector& scm_eigenvalues, double x, int N, int K);
double theta_residual(const RVector& scm_eigenvalues, double x, int N, int K, double theta);

}  // namespace dlcfar
