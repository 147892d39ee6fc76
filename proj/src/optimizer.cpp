#include "dlcfar/optimizer.hpp"

#include <cmath>

#include "dlcfar/estimators.hpp"
#include "dlcfar/rmt.hpp"

namespace dlcfar {

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (!(hi > lo) || n < 2) throw DomainError("linear_grid: need lo < hi and n >= 2");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

std::vector<double> step_grid(double lo, double step, double hi) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("step_grid: need step > 0 and hi >= lo");
  std::vector<double> g;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 0.5));
  for (int i = 0; i <= n; ++i) g.push_back(lo + step * i);
  return g;
}

OptResult maximize_loading(const Objective& f, double lambda_max, const OptConfig& cfg) {
  if (!(lambda_max > cfg.grid_min)) throw DomainError("maximize_loading: lambda_max must exceed grid_min");
  if (cfg.grid_points < 3) throw DomainError("maximize_loading: need at least 3 grid points");
  if (!(cfg.tol > 0.0)) throw DomainError("maximize_loading: tol must be positive");

  OptResult r;
  std::vector<double> lam{0.0};
  const auto lg = log_grid(cfg.grid_min, lambda_max, cfg.grid_points);
  lam.insert(lam.end(), lg.begin(), lg.end());
  std::vector<double> val(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) val[i] = f(lam[i]);
  r.evaluations = static_cast<int>(lam.size());

  std::size_t best = 0;
  double lo_val = val[0], hi_val = val[0];
  for (std::size_t i = 1; i < lam.size(); ++i) {
    if (!std::isfinite(val[i])) throw NumericalError("maximize_loading: objective not finite at lambda " +
                                                     std::to_string(lam[i]));
    if (val[i] > val[best]) best = i;
    lo_val = std::min(lo_val, val[i]);
    hi_val = std::max(hi_val, val[i]);
  }

  const double scale = std::max(std::abs(val[0]), 1e-300);
  if (hi_val - lo_val <= cfg.flat_tol * scale) {
    r.lambda_star = 0.0;
    r.objective_value = val[0];
    r.bracket_lo = 0.0;
    r.bracket_hi = lam.back();
    r.converged = false;
    return r;
  }

  const std::size_t il = best == 0 ? 0 : best - 1;
  const std::size_t ih = std::min(best + 1, lam.size() - 1);
  double a = lam[il], b = lam[ih];
  r.bracket_lo = a;
  r.bracket_hi = b;
  r.lambda_star = lam[best];
  r.objective_value = val[best];

  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  r.evaluations += 2;
  while (b - a > cfg.tol * std::max(0.5 * (a + b), cfg.grid_min)) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    ++r.evaluations;
    if (r.evaluations > 10000) break;
  }
  const double xm = f1 >= f2 ? x1 : x2;
  const double fm = std::max(f1, f2);
  if (fm > r.objective_value) {
    r.lambda_star = xm;
    r.objective_value = fm;
  }
  r.converged = true;
  return r;
}

OptResult lambda_opt(const HermitianSpectrum& R, const SteeringVector& s, int K, const OptConfig& cfg) {
  const SpectralWeights sw = R.weights(s.entries);
  const double lmax = cfg.lambda_max > 0.0 ? cfg.lambda_max : 100.0 * R.mean_eigenvalue();
  return maximize_loading([&](double lam) { return kappa_lower(deterministic_equivalents(sw, lam, K)); }, lmax,
                          cfg);
}

OptResult lambda_opt_hat(const SpectralWeights& scm, int N, int K, const OptConfig& cfg) {
  const double lmax = cfg.lambda_max > 0.0 ? cfg.lambda_max : 100.0 * scm.eigenvalues.mean();
  return maximize_loading([&](double lam) { return kappa_lower_hat(scm, lam, N, K); }, lmax, cfg);
}

OptResult lambda_opt_hat(const HermitianSpectrum& scm, const SteeringVector& s, int N, int K,
                         const OptConfig& cfg) {
  return lambda_opt_hat(scm.weights(s.entries), N, K, cfg);
}

Curve kappa_lambda_curve(const Objective& f, const std::vector<double>& grid) {
  Curve c;
  c.x_label = "lambda";
  c.y_label = "kappa";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("kappa_lambda_curve: grid must be increasing");
    c.add(grid[i], f(grid[i]));
  }
  return c;
}

std::vector<double> level_crossings(const Objective& f, const std::vector<double>& grid, double level) {
  std::vector<double> roots;
  double prev = f(grid.front()) - level;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = f(grid[i]) - level;
    if (cur == 0.0) {
      roots.push_back(grid[i]);
    } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
      double a = grid[i - 1], b = grid[i], fa = prev;
      for (int it = 0; it < 200 && b - a > 1e-13 * b; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m) - level;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = cur;
  }
  return roots;
}

}  // namespace dlcfar
