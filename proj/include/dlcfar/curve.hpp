#pragma once

#include <string>
#include <vector>

namespace dlcfar {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

// x strictly increasing. Curves without a confidence band carry ci_lo = ci_hi = y.
struct Curve {
  std::string x_label = "x";
  std::string y_label = "y";
  std::vector<CurvePoint> points;

  void add(double x, double y) { points.push_back({x, y, y, y}); }
  void add(double x, double y, double lo, double hi) { points.push_back({x, y, lo, hi}); }
};

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);
// lo, lo + step, ... up to hi inclusive (within half a step of rounding)
std::vector<double> step_grid(double lo, double step, double hi);

}  // namespace dlcfar
