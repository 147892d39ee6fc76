#include "dlcfar/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace dlcfar {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  const int w = std::max(1, std::min<int>(resolve_workers(workers), static_cast<int>(std::max<std::size_t>(n, 1))));
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ProportionCI wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) throw DomainError("wilson_interval: no trials");
  ProportionCI ci;
  ci.successes = k;
  ci.trials = n;
  const double nn = static_cast<double>(n);
  const double p = k / nn;
  ci.estimate = p;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  ci.lo = std::max(0.0, centre - half);
  ci.hi = std::min(1.0, centre + half);
  return ci;
}

std::size_t FormSet::index_of(const std::string& tag) const {
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == tag) return i;
  throw DomainError("FormSet: no detector \"" + tag + "\"");
}

std::vector<double> FormSet::h0(std::size_t detector) const {
  const auto& f = forms.at(detector);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].value();
  return out;
}

FormSet simulate_forms(const ScenarioModel& model, const std::vector<DetectorSpec>& detectors, std::size_t trials,
                       std::uint64_t seed, std::uint64_t phase, int workers) {
  if (detectors.empty()) throw ConfigError("simulate_forms: no detectors");
  if (trials == 0) throw ConfigError("simulate_forms: trials must be positive");
  bool adaptive = false;
  FormSet set;
  for (const auto& d : detectors) {
    check_support(d, model.N(), model.K());
    adaptive = adaptive || d.kind != DetectorKind::Np;
    set.tags.push_back(d.tag());
  }
  set.quad_inverse = model.quad_inverse;
  set.forms.assign(detectors.size(), std::vector<StatisticForm>(trials));
  set.z_b.resize(trials);
  const CVector& s = model.steering.entries;

  parallel_for(trials, workers, [&](std::size_t i) {
    RngStream rng(seed, phase, i);
    TrialDraw draw = draw_trial(model, rng, adaptive);
    set.z_b[i] = draw.z_b;
    if (adaptive) {
      const HermitianSpectrum R_hat = scm(draw.secondary);
      const TrialView view(&R_hat, model.K(), s, draw.c0);
      for (std::size_t d = 0; d < detectors.size(); ++d) set.forms[d][i] = evaluate_form(detectors[d], view);
    } else {
      const TrialView view(nullptr, model.K(), s, draw.c0);
      for (std::size_t d = 0; d < detectors.size(); ++d) set.forms[d][i] = evaluate_form(detectors[d], view);
    }
  });
  return set;
}

Threshold threshold_from_samples(std::vector<double> samples, double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw DomainError("threshold: pfa must lie in (0, 1)");
  const std::size_t T = samples.size();
  if (T == 0) throw ConfigError("threshold: no samples");
  const double expected = T * pfa;
  if (expected < 50.0 - 1e-9) {
    throw ConfigError("threshold: trials * pfa = " + std::to_string(expected) + " is below 50");
  }
  const auto rank = static_cast<std::size_t>(std::ceil(T * (1.0 - pfa) - 1e-9));
  if (rank < 1 || rank > T) throw ConfigError("threshold: quantile rank out of range");
  std::nth_element(samples.begin(), samples.begin() + (rank - 1), samples.end());
  Threshold th;
  th.rank = rank;
  th.tau = samples[rank - 1];
  const auto exceed = static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [&](double x) { return x > th.tau; }));
  th.achieved_pfa = wilson_interval(exceed, T);
  return th;
}

Threshold calibrate_threshold(const TrialConfig& cfg) {
  const ScenarioModel model = make_model(cfg.scenario);
  const FormSet set = simulate_forms(model, {cfg.detector}, cfg.trials, cfg.master_seed, kPhaseThreshold, cfg.workers);
  return threshold_from_samples(set.h0(0), cfg.pfa_pre);
}

Complex amplitude_for(double scnr, TargetKind target, double q, Complex z_b) {
  if (!(scnr >= 0.0)) throw DomainError("SCNR must be nonnegative");
  const double a = std::sqrt(scnr / q);
  return target == TargetKind::Swerling0 ? Complex(a, 0.0) : a * z_b;
}

ProportionCI estimate_pd(const FormSet& set, std::size_t detector, double tau, double scnr, TargetKind target) {
  const auto& f = set.forms.at(detector);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].value(amplitude_for(scnr, target, set.quad_inverse, set.z_b[i])) > tau) ++hits;
  }
  return wilson_interval(hits, f.size());
}

ProportionCI estimate_pd(const TrialConfig& cfg, double tau, double scnr, TargetKind target) {
  const ScenarioModel model = make_model(cfg.scenario);
  const FormSet set = simulate_forms(model, {cfg.detector}, cfg.pd_trials, cfg.master_seed, kPhaseDetection,
                                     cfg.workers);
  return estimate_pd(set, 0, tau, scnr, target);
}

Curve pd_vs_scnr_sweep(const FormSet& set, std::size_t detector, double tau, const std::vector<double>& grid,
                       TargetKind target) {
  Curve c;
  c.x_label = "scnr_db";
  c.y_label = "pd";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("pd sweep: SCNR grid must be increasing");
    const ProportionCI ci = estimate_pd(set, detector, tau, db_to_linear(grid[i]), target);
    c.add(grid[i], ci.estimate, ci.lo, ci.hi);
  }
  return c;
}

double scnr_at_pd(const FormSet& set, std::size_t detector, double tau, double pd_target, TargetKind target,
                  const ScnrSearch& search) {
  auto pd = [&](double db) { return estimate_pd(set, detector, tau, db_to_linear(db), target).estimate; };
  double lo = search.lo_db, hi = search.hi_db;
  double p_lo = pd(lo), p_hi = pd(hi);
  for (int grow = 0; grow < 4 && !(p_lo < pd_target && p_hi >= pd_target); ++grow) {
    if (!(p_lo < pd_target)) lo -= 20.0;
    if (!(p_hi >= pd_target)) hi += 20.0;
    p_lo = pd(lo);
    p_hi = pd(hi);
  }
  if (!(p_lo < pd_target && p_hi >= pd_target)) {
    Curve c = pd_vs_scnr_sweep(set, detector, tau, step_grid(lo, (hi - lo) / 20.0, hi), target);
    throw BracketError("scnr_at_pd: P_d = " + std::to_string(pd_target) + " not bracketed for " +
                           set.tags.at(detector),
                       std::move(c));
  }
  while (hi - lo > search.width_db) {
    const double mid = 0.5 * (lo + hi);
    if (pd(mid) < pd_target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double Histogram::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i) s += densities[i] * (edges[i + 1] - edges[i]);
  return s;
}

Histogram empirical_pdf(const std::vector<double>& samples, int bins) {
  if (samples.empty()) throw DomainError("empirical_pdf: no samples");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  double lo = std::min(0.0, *mn), hi = *mx;
  if (!(hi > lo)) hi = lo + 1.0;
  // nudge so the maximum falls inside the last bin
  hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
  return empirical_pdf(samples, bins, lo, hi);
}

Histogram empirical_pdf(const std::vector<double>& samples, int bins, double lo, double hi) {
  if (samples.empty()) throw DomainError("empirical_pdf: no samples");
  if (bins < 1 || !(hi > lo)) throw DomainError("empirical_pdf: need bins >= 1 and hi > lo");
  Histogram h;
  h.sample_count = samples.size();
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * i / bins;
  std::vector<std::size_t> counts(bins, 0);
  const double w = (hi - lo) / bins;
  for (double x : samples) {
    if (x < lo || x >= hi) continue;
    const int b = std::min(bins - 1, static_cast<int>((x - lo) / w));
    ++counts[b];
  }
  h.densities.resize(bins);
  for (int i = 0; i < bins; ++i) h.densities[i] = counts[i] / (static_cast<double>(samples.size()) * w);
  return h;
}

double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw DomainError("ks_distance: no samples");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double mean(const std::vector<double>& x) {
  if (x.empty()) throw DomainError("mean: empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double standard_error(const std::vector<double>& x) {
  if (x.size() < 2) throw DomainError("standard_error: need two samples");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / (x.size() - 1) / x.size());
}

std::vector<LossRow> loss_table(const ScenarioModel& model, const std::vector<DetectorSpec>& detectors,
                                const LossTableConfig& cfg) {
  const FormSet h0 = simulate_forms(model, detectors, cfg.threshold_trials, cfg.seed, kPhaseThreshold, cfg.workers);
  const FormSet h1 = simulate_forms(model, detectors, cfg.pd_trials, cfg.seed, kPhaseDetection, cfg.workers);
  std::vector<LossRow> rows;
  for (std::size_t d = 0; d < detectors.size(); ++d) {
    LossRow r;
    r.tag = detectors[d].tag();
    r.tau = threshold_from_samples(h0.h0(d), cfg.pfa).tau;
    r.scnr_db_swerling0 = scnr_at_pd(h1, d, r.tau, cfg.pd_target, TargetKind::Swerling0);
    r.scnr_db_swerling1 = scnr_at_pd(h1, d, r.tau, cfg.pd_target, TargetKind::Swerling1);
    rows.push_back(r);
  }
  for (auto& r : rows) {
    r.loss_db_swerling0 = r.scnr_db_swerling0 - rows.front().scnr_db_swerling0;
    r.loss_db_swerling1 = r.scnr_db_swerling1 - rows.front().scnr_db_swerling1;
  }
  return rows;
}

}  // namespace dlcfar
