#pragma once

#include <functional>
#include <vector>

#include "dlcfar/curve.hpp"
#include "dlcfar/scenario.hpp"
#include "dlcfar/spectrum.hpp"

namespace dlcfar {

struct OptConfig {
  // Upper end of the search; <= 0 means 100 x mean eigenvalue of the matrix searched.
  double lambda_max = 0.0;
  int grid_points = 200;
  double grid_min = 1e-3;
  // Relative tolerance on lambda for the golden-section refinement.
  double tol = 1e-4;
  // Relative objective spread below which the objective counts as flat.
  double flat_tol = 1e-12;
};

struct OptResult {
  double lambda_star = 0.0;
  double objective_value = 0.0;
  int evaluations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool converged = false;
};

using Objective = std::function<double(double)>;

// Grid over {0} and a log grid on [grid_min, lambda_max], then golden section
// in the cells around the best grid point. Ties go to the smallest lambda.
OptResult maximize_loading(const Objective& f, double lambda_max, const OptConfig& cfg = {});

OptResult lambda_opt(const HermitianSpectrum& R, const SteeringVector& s, int K, const OptConfig& cfg = {});
OptResult lambda_opt_hat(const SpectralWeights& scm, int N, int K, const OptConfig& cfg = {});
OptResult lambda_opt_hat(const HermitianSpectrum& scm, const SteeringVector& s, int N, int K,
                         const OptConfig& cfg = {});

Curve kappa_lambda_curve(const Objective& f, const std::vector<double>& lambda_grid);

// Points where f crosses level between adjacent grid samples, refined by bisection on f.
std::vector<double> level_crossings(const Objective& f, const std::vector<double>& lambda_grid, double level);

}  // namespace dlcfar
