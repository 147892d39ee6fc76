#include "dlcfar/rmt.hpp"

#include <cmath>

namespace dlcfar {

namespace {

void check_inputs(const RVector& rho, double lambda, int K) {
  if (rho.size() == 0) throw DomainError("rmt: empty spectrum");
  if (K < 1) throw DomainError("rmt: K must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("rmt: lambda must be finite and >= 0");
  if (!(rho.minCoeff() > 0.0)) throw DomainError("rmt: eigenvalues must be positive");
  if (rho.size() >= K) throw DomainError("rmt: requires N < K");
}

double trace_term(const RVector& rho, double lambda, double delta) {
  return (delta + lambda / rho.array()).inverse().sum();
}

}  // namespace

double delta_residual(const RVector& rho, double lambda, int K, double delta) {
  return delta * (1.0 + trace_term(rho, lambda, delta) / K) - 1.0;
}

double solve_delta(const RVector& rho, double lambda, int K, const DeltaOptions& opt) {
  check_inputs(rho, lambda, K);
  const double c = static_cast<double>(rho.size()) / K;
  if (lambda == 0.0) return 1.0 - c;

  double d = 1.0 - c;
  for (int it = 0; it < opt.max_iter; ++it) {
    const double next = 1.0 / (1.0 + trace_term(rho, lambda, d) / K);
    if (std::abs(next - d) < opt.tol) {
      d = next;
      if (std::abs(delta_residual(rho, lambda, K, d)) < 1e-12) return d;
      break;
    }
    d = next;
  }

  // The residual is increasing in delta, negative at 1 - c and positive at 1.
  double lo = 1.0 - c, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (delta_residual(rho, lambda, K, mid) < 0.0) lo = mid; else hi = mid;
    if (hi - lo < 1e-16) break;
  }
  d = 0.5 * (lo + hi);
  const double r = delta_residual(rho, lambda, K, d);
  if (!(std::abs(r) < 1e-12)) throw NumericalError("solve_delta: no convergence", r);
  return d;
}

AsymptoticParams deterministic_equivalents(const SpectralWeights& R, double lambda, int K) {
  const RVector& rho = R.eigenvalues;
  const RVector& w = R.weights;
  check_inputs(rho, lambda, K);
  AsymptoticParams p;
  p.lambda = lambda;
  p.c = static_cast<double>(rho.size()) / K;
  p.delta = solve_delta(rho, lambda, K);
  const double d = p.delta;
  const auto denom = (d * rho.array() + lambda);
  p.psi = (w.array() / denom).sum();
  p.xi = (w.array() * rho.array() / denom.square()).sum();
  p.gamma = d * d / K * (d + lambda / rho.array()).inverse().square().sum();
  p.mu0 = p.xi / (1.0 - p.gamma);
  p.quad_inv = (w.array() / rho.array()).sum();
  return p;
}

AsymptoticParams deterministic_equivalents(const HermitianSpectrum& R, const SteeringVector& s, double lambda,
                                           int K) {
  return deterministic_equivalents(R.weights(s.entries), lambda, K);
}

double mu1(const AsymptoticParams& p, double sigma_t2) {
  if (!(sigma_t2 >= 0.0)) throw DomainError("mu1: target power must be nonnegative");
  return sigma_t2 * p.psi * p.psi + p.mu0;
}

double kappa_lower(const AsymptoticParams& p) { return (1.0 - p.gamma) * p.psi * p.psi / p.xi; }

double kappa(const AsymptoticParams& p) { return kappa_lower(p) / p.quad_inv; }

double kappa(const HermitianSpectrum& R, const SteeringVector& s, double lambda, int K) {
  return kappa(deterministic_equivalents(R, s, lambda, K));
}

double kappa_lower(const HermitianSpectrum& R, const SteeringVector& s, double lambda, int K) {
  return kappa_lower(deterministic_equivalents(R, s, lambda, K));
}

double kappa_limit_infinity(const HermitianSpectrum& R, const SteeringVector& s) {
  return 1.0 / (R.quad_inverse(s.entries) * R.quad(s.entries));
}

double kappa_derivative_at_zero(const HermitianSpectrum& R, int K) {
  const double c = static_cast<double>(R.dim()) / K;
  if (!(c > 0.0 && c < 1.0)) throw DomainError("kappa_derivative_at_zero: requires N < K");
  return 2.0 * R.trace_inverse() / (K * (1.0 - c));
}

}  // namespace dlcfar
