#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dlcfar/curve.hpp"
#include "dlcfar/detectors.hpp"
#include "dlcfar/scenario.hpp"
#include "dlcfar/theory.hpp"

namespace dlcfar {

struct TrialConfig {
  Scenario scenario;
  DetectorSpec detector;
  std::size_t trials = 100000;    // threshold calibration
  std::size_t pd_trials = 10000;  // per detection-probability point
  std::uint64_t master_seed = 1;
  double pfa_pre = 1e-3;
  int workers = 0;  // 0: one per hardware thread
};

int resolve_workers(int requested);

// Runs body(i) for i in [0, n) on a pool of threads. Each index is handled
// exactly once; the first exception is rethrown after all threads join.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

struct ProportionCI {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
};

inline constexpr double kZ95 = 1.959964;
ProportionCI wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

// Statistic forms of several detectors over shared datasets, one per trial index.
struct FormSet {
  std::vector<std::string> tags;
  std::vector<std::vector<StatisticForm>> forms;  // [detector][trial]
  std::vector<Complex> z_b;                       // unit-power target draw of each trial
  double quad_inverse = 0.0;                      // s^H R^-1 s of the scenario

  std::size_t trials() const { return z_b.size(); }
  std::size_t index_of(const std::string& tag) const;
  std::vector<double> h0(std::size_t detector) const;
};

FormSet simulate_forms(const ScenarioModel& model, const std::vector<DetectorSpec>& detectors, std::size_t trials,
                       std::uint64_t seed, std::uint64_t phase, int workers);

struct Threshold {
  double tau = 0.0;
  std::size_t rank = 0;  // 1-based order statistic
  ProportionCI achieved_pfa;
};

// Order statistic at rank ceil(T (1 - pfa)); exceedance means stat > tau.
Threshold threshold_from_samples(std::vector<double> samples, double pfa);
Threshold calibrate_threshold(const TrialConfig& cfg);

// Amplitude for linear SCNR S: Swerling 0 gives sqrt(S/q), Swerling I sqrt(S/q) z_b.
Complex amplitude_for(double scnr_linear, TargetKind target, double quad_inverse, Complex z_b);

ProportionCI estimate_pd(const FormSet& set, std::size_t detector, double tau, double scnr_linear,
                         TargetKind target);
ProportionCI estimate_pd(const TrialConfig& cfg, double tau, double scnr_linear, TargetKind target);

Curve pd_vs_scnr_sweep(const FormSet& set, std::size_t detector, double tau, const std::vector<double>& scnr_db,
                       TargetKind target);

class BracketError : public NumericalError {
 public:
  BracketError(const std::string& what, Curve curve) : NumericalError(what), curve_(std::move(curve)) {}
  const Curve& curve() const { return curve_; }

 private:
  Curve curve_;
};

struct ScnrSearch {
  double lo_db = -20.0;
  double hi_db = 40.0;
  double width_db = 0.005;
};

// Bisection in dB on the empirical P_d of the fixed trial set.
double scnr_at_pd(const FormSet& set, std::size_t detector, double tau, double pd_target, TargetKind target,
                  const ScnrSearch& search = {});

struct Histogram {
  std::vector<double> edges;
  std::vector<double> densities;
  std::size_t sample_count = 0;

  double integral() const;
};

Histogram empirical_pdf(const std::vector<double>& samples, int bins);
// Same, restricted to [lo, hi]; densities are normalised by the full sample count.
Histogram empirical_pdf(const std::vector<double>& samples, int bins, double lo, double hi);

double ks_distance(std::vector<double> samples, const std::function<double(double)>& reference_cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

double mean(const std::vector<double>& x);
double standard_error(const std::vector<double>& x);

// Loss of each detector relative to the first one (normally np) at pd_target.
struct LossRow {
  std::string tag;
  double tau = 0.0;
  double scnr_db_swerling0 = 0.0;
  double scnr_db_swerling1 = 0.0;
  double loss_db_swerling0 = 0.0;
  double loss_db_swerling1 = 0.0;
};

struct LossTableConfig {
  std::size_t threshold_trials = 100000;
  std::size_t pd_trials = 10000;
  std::uint64_t seed = 1;
  double pfa = 1e-3;
  double pd_target = 0.5;
  int workers = 0;
};

std::vector<LossRow> loss_table(const ScenarioModel& model, const std::vector<DetectorSpec>& detectors,
                                const LossTableConfig& cfg);

}  // namespace dlcfar
