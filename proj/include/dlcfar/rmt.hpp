#pragma once

#include "dlcfar/scenario.hpp"
#include "dlcfar/spectrum.hpp"

namespace dlcfar {

struct AsymptoticParams {
  double lambda = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double psi = 0.0;  // u^H E u, also the limit of beta_DL
  double xi = 0.0;   // u^H E^2 u
  double mu0 = 0.0;
  double quad_inv = 0.0;  // s^H R^-1 s
  double c = 0.0;

  double beta_dl() const { return psi; }
};

struct DeltaOptions {
  double tol = 1e-13;
  int max_iter = 10000;
};

// Unique delta in (0, 1] with delta * (1 + (1/K) sum 1/(delta + lambda/rho_i)) = 1.
double solve_delta(const RVector& eigenvalues, double lambda, int K, const DeltaOptions& opt = {});
double delta_residual(const RVector& eigenvalues, double lambda, int K, double delta);

AsymptoticParams deterministic_equivalents(const SpectralWeights& R, double lambda, int K);
AsymptoticParams deterministic_equivalents(const HermitianSpectrum& R, const SteeringVector& s, double lambda,
                                           int K);

double mu1(const AsymptoticParams& p, double sigma_t2);

double kappa(const AsymptoticParams& p);
double kappa_lower(const AsymptoticParams& p);
double kappa(const HermitianSpectrum& R, const SteeringVector& s, double lambda, int K);
double kappa_lower(const HermitianSpectrum& R, const SteeringVector& s, double lambda, int K);

// Closed-form lambda -> infinity limit 1 / ((s^H R^-1 s)(s^H R s)).
double kappa_limit_infinity(const HermitianSpectrum& R, const SteeringVector& s);
// 2 tr(R^-1) / (K (1 - c))
double kappa_derivative_at_zero(const HermitianSpectrum& R, int K);

}  // namespace dlcfar
