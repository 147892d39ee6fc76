#include "dlcfar/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlcfar/estimators.hpp"
#include "dlcfar/optimizer.hpp"
#include "dlcfar/report.hpp"
#include "dlcfar/rmt.hpp"
#include "dlcfar/scenario_json.hpp"
#include "dlcfar/theory.hpp"

namespace dlcfar {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": cannot parse \"" + s + "\" as a number");
  }
}

std::string join_command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// Output directory plus the manifest that lists every file written into it.
class OutputSink {
 public:
  OutputSink(std::string dir, std::string command_line, json config, std::uint64_t seed)
      : dir_(std::move(dir)), manifest_(std::move(command_line), std::move(config), seed) {
    std::filesystem::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

  void curve(const std::string& name, const Curve& c) { file(name, curve_to_csv(c)); }

  void table(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows) {
    file(name, table_to_csv(header, rows));
  }

  void file(const std::string& name, const std::string& contents) {
    const std::string p = path(name);
    write_text_file(p, contents);
    manifest_.add_output(p);
  }

  RunManifest& manifest() { return manifest_; }

  std::vector<std::string> finish() {
    const std::string p = path("manifest.json");
    manifest_.write(p);
    std::vector<std::string> out = manifest_.outputs();
    out.push_back(p);
    return out;
  }

 private:
  std::string dir_;
  RunManifest manifest_;
};

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string target_name(TargetKind t) { return t == TargetKind::Swerling0 ? "swerling0" : "swerling1"; }

std::vector<TargetKind> parse_targets(const std::string& s) {
  if (s == "swerling0") return {TargetKind::Swerling0};
  if (s == "swerling1") return {TargetKind::Swerling1};
  if (s == "both") return {TargetKind::Swerling0, TargetKind::Swerling1};
  throw ConfigError("--target: expected swerling0, swerling1 or both");
}

std::vector<DetectorSpec> build_detectors(const std::vector<DetectorKind>& kinds, double lambda,
                                          const ScenarioModel& model, const OptConfig& opt) {
  std::vector<DetectorSpec> out;
  for (DetectorKind k : kinds) {
    out.push_back(make_detector(k, lambda, &model, opt));
    check_support(out.back(), model.N(), model.K());
  }
  return out;
}

// Asymptotic efficiency factor of a detector, when the theory provides one.
std::optional<double> theory_kappa(const DetectorSpec& d, const ScenarioModel& m) {
  if (d.kind == DetectorKind::Np) return 1.0;
  if (m.K() <= m.N()) return std::nullopt;
  const HermitianSpectrum& R = *m.covariance;
  switch (d.kind) {
    case DetectorKind::ScmAmf: return 1.0 - m.scenario.c();
    case DetectorKind::DlAmf:
    case DetectorKind::DlScmBeta:
    case DetectorKind::DlRaw:
    case DetectorKind::CfarDlScmf:
    case DetectorKind::CfarDlAmf:
    case DetectorKind::OptCfarDlScmf:
      return kappa(R, m.steering, d.lambda, m.K());
    case DetectorKind::OptCfarDlAmf:
      return kappa(R, m.steering, lambda_opt(R, m.steering, m.K(), d.opt).lambda_star, m.K());
    default: return std::nullopt;
  }
}

std::string spec_label(const DetectorSpec& d) {
  if (takes_fixed_lambda(d.kind) || d.kind == DetectorKind::OptCfarDlScmf) {
    std::ostringstream s;
    s << d.tag() << "_lambda" << d.lambda;
    return s.str();
  }
  return d.tag();
}

struct RocResult {
  std::vector<Threshold> thresholds;
};

// Thresholds on H0 trials and P_d curves on H1 trials for several detectors
// sharing datasets; theory curves are written where kappa is known.
RocResult roc_block(OutputSink& out, const std::string& prefix, const ScenarioModel& model,
                    const std::vector<DetectorSpec>& dets, const std::vector<double>& grid_db,
                    const std::vector<TargetKind>& targets, const Budget& budget, std::uint64_t seed, int workers,
                    double pfa) {
  RocResult r;
  const FormSet h0 = simulate_forms(model, dets, budget.threshold_trials, seed, kPhaseThreshold, workers);
  const FormSet h1 = simulate_forms(model, dets, budget.pd_trials, seed, kPhaseDetection, workers);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t d = 0; d < dets.size(); ++d) {
    const Threshold th = threshold_from_samples(h0.h0(d), pfa);
    r.thresholds.push_back(th);
    const std::string label = spec_label(dets[d]);
    out.manifest().add_tag(dets[d].tag());
    rows.push_back({label, format_number(th.tau), format_number(th.achieved_pfa.estimate),
                    format_number(th.achieved_pfa.lo), format_number(th.achieved_pfa.hi),
                    std::to_string(budget.threshold_trials)});
    const auto kap = theory_kappa(dets[d], model);
    for (TargetKind t : targets) {
      out.curve(prefix + "pd_" + label + "_" + target_name(t) + ".csv", pd_vs_scnr_sweep(h1, d, th.tau, grid_db, t));
      if (kap) {
        Curve c;
        c.x_label = "scnr_db";
        c.y_label = "pd";
        for (double db : grid_db) c.add(db, roc(t, db_to_linear(db), std::min(*kap, 1.0), pfa));
        out.curve(prefix + "theory_" + label + "_" + target_name(t) + ".csv", c);
      }
    }
  }
  out.table(prefix + "thresholds.csv", {"detector", "tau", "achieved_pfa", "ci_lo", "ci_hi", "trials"}, rows);
  return r;
}

Curve histogram_curve(const std::vector<double>& samples, int bins) {
  const Histogram h = empirical_pdf(samples, bins);
  Curve c;
  c.x_label = "statistic";
  c.y_label = "density";
  const double n = static_cast<double>(h.sample_count);
  for (std::size_t i = 0; i < h.densities.size(); ++i) {
    const double w = h.edges[i + 1] - h.edges[i];
    const auto count = static_cast<std::size_t>(std::llround(h.densities[i] * n * w));
    const ProportionCI ci = wilson_interval(count, h.sample_count);
    c.add(0.5 * (h.edges[i] + h.edges[i + 1]), h.densities[i], ci.lo / w, ci.hi / w);
  }
  return c;
}

Curve exponential_pdf_curve(double rate, double hi, int n) {
  Curve c;
  c.x_label = "statistic";
  c.y_label = "density";
  for (double x : linear_grid(0.0, hi, n)) c.add(x, rate * std::exp(-rate * x));
  return c;
}

struct HistCase {
  std::string label;
  Scenario scenario;
  double lambda;
};

// H0 histograms of one detector over several scenarios, with the asymptotic
// exponential density beside each one.
void histogram_block(OutputSink& out, const std::string& prefix, DetectorKind kind, const std::vector<HistCase>& cases,
                     std::size_t trials, std::uint64_t seed, int workers, bool cfar_reference) {
  for (const auto& hc : cases) {
    const ScenarioModel model = make_model(hc.scenario);
    const DetectorSpec spec = make_detector(kind, hc.lambda, &model);
    out.manifest().add_tag(spec.tag());
    const FormSet set = simulate_forms(model, {spec}, trials, seed, kPhaseThreshold, workers);
    const std::vector<double> x = set.h0(0);
    out.curve(prefix + "hist_" + hc.label + ".csv", histogram_curve(x, 100));
    double rate = 1.0;
    if (!cfar_reference) {
      const AsymptoticParams p = deterministic_equivalents(*model.covariance, model.steering, hc.lambda, model.K());
      rate = p.psi / p.mu0;
    }
    const double hi = *std::max_element(x.begin(), x.end());
    out.curve(prefix + "theory_" + hc.label + ".csv", exponential_pdf_curve(rate, hi, 200));
  }
}

std::vector<HistCase> cfar_cases(double lambda_fixed) {
  std::vector<HistCase> v;
  for (double rho : {0.1, 0.5, 0.95})
    v.push_back({"rho" + short_number(rho), toeplitz_scenario(24, 48, rho, 20.0), lambda_fixed});
  for (double th : {0.0, 5.0})
    v.push_back({"theta" + short_number(th), toeplitz_scenario(24, 48, 0.95, th), lambda_fixed});
  for (double lam : {5.0, 10.0})
    v.push_back({"lambda" + short_number(lam), toeplitz_scenario(24, 48, 0.95, 20.0), lam});
  return v;
}

void kappa_table(OutputSink& out, const std::string& name, const ScenarioModel& m, std::vector<double> grid) {
  if (grid.empty() || grid.front() != 0.0) grid.insert(grid.begin(), 0.0);
  const double c = m.scenario.c();
  std::vector<std::vector<std::string>> rows;
  for (double lam : grid) {
    const AsymptoticParams p = deterministic_equivalents(*m.covariance, m.steering, lam, m.K());
    rows.push_back({format_number(lam), format_number(kappa(p)), format_number(kappa_lower(p)), format_number(1.0 - c)});
  }
  out.table(name, {"lambda", "kappa", "kappa_lower", "one_minus_c"}, rows);
}

json kappa_summary(const ScenarioModel& m, const OptConfig& opt) {
  const HermitianSpectrum& R = *m.covariance;
  const OptResult r = lambda_opt(R, m.steering, m.K(), opt);
  const double c = m.scenario.c();
  const double lmax = opt.lambda_max > 0.0 ? opt.lambda_max : 100.0 * R.mean_eigenvalue();
  auto f = [&](double lam) { return kappa(R, m.steering, lam, m.K()); };
  json j;
  j["lambda_opt"] = r.lambda_star;
  j["kappa_opt"] = r.objective_value / m.quad_inverse;
  j["loss_db"] = detection_loss_db(r.objective_value / m.quad_inverse);
  j["kappa_limit_infinity"] = kappa_limit_infinity(R, m.steering);
  j["kappa_derivative_at_zero"] = kappa_derivative_at_zero(R, m.K());
  j["one_minus_c_crossings"] = level_crossings(f, log_grid(1e-3, lmax, 400), 1.0 - c);
  return j;
}

void dl_figure(OutputSink& out, const Scenario& sc, const std::vector<double>& extra_lambdas, const Budget& b,
               std::uint64_t seed, int workers, double pfa) {
  const ScenarioModel m = make_model(sc);
  kappa_table(out, "kappa.csv", m, log_grid(1e-3, 1e3, 400));
  const json summary = kappa_summary(m, {});
  out.manifest().set_extra("kappa", summary);
  std::vector<DetectorSpec> dets{make_detector(DetectorKind::Np, 0.0, &m), make_detector(DetectorKind::ScmAmf)};
  std::vector<double> lams = extra_lambdas;
  lams.push_back(summary["lambda_opt"].get<double>());
  std::sort(lams.begin(), lams.end());
  for (double lam : lams) dets.push_back(make_detector(DetectorKind::DlAmf, lam));
  roc_block(out, "", m, dets, step_grid(-10.0, 1.0, 40.0), {TargetKind::Swerling0, TargetKind::Swerling1}, b, seed,
            workers, pfa);
}

void loss_block(OutputSink& out, const std::string& prefix, const Scenario& sc, const Budget& b, std::uint64_t seed,
                int workers, double pfa) {
  const ScenarioModel m = make_model(sc);
  const std::vector<DetectorKind> kinds{DetectorKind::Np,        DetectorKind::ScmAmf,       DetectorKind::PersymAmf,
                                        DetectorKind::CfarElAmf, DetectorKind::OptCfarDlScmf, DetectorKind::OptCfarDlAmf};
  const auto dets = build_detectors(kinds, 0.0, m, {});
  LossTableConfig cfg;
  cfg.threshold_trials = b.threshold_trials;
  cfg.pd_trials = b.pd_trials;
  cfg.seed = seed;
  cfg.pfa = pfa;
  cfg.workers = workers;
  const auto rows = loss_table(m, dets, cfg);
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.tag, format_number(r.tau), format_number(r.scnr_db_swerling0), format_number(r.scnr_db_swerling1),
                     format_number(r.loss_db_swerling0), format_number(r.loss_db_swerling1)});
    out.manifest().add_tag(r.tag);
  }
  out.table(prefix + "loss_table.csv",
            {"detector", "tau", "scnr_db_swerling0", "scnr_db_swerling1", "loss_db_swerling0", "loss_db_swerling1"},
            cells);
  roc_block(out, prefix, m, dets, step_grid(-5.0, 1.0, 30.0), {TargetKind::Swerling0, TargetKind::Swerling1}, b,
            seed, workers, pfa);
}

int report_error(int code, const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  std::cerr << j.dump() << std::endl;
  return code;
}

}  // namespace

std::vector<double> parse_lambda_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4) throw ConfigError("--lambda-grid: expected LO:LOG:HI:N or LO:LIN:HI:N");
  const double lo = to_double(parts[0], "--lambda-grid"), hi = to_double(parts[2], "--lambda-grid");
  const double n = to_double(parts[3], "--lambda-grid");
  if (n < 2 || n != std::floor(n)) throw ConfigError("--lambda-grid: N must be an integer >= 2");
  if (lo < 0.0 || !(hi > lo)) throw ConfigError("--lambda-grid: need 0 <= LO < HI");
  if (parts[1] == "LOG" || parts[1] == "log") {
    if (!(lo > 0.0)) throw ConfigError("--lambda-grid: LOG spacing needs LO > 0 (lambda = 0 is always included)");
    return log_grid(lo, hi, static_cast<int>(n));
  }
  if (parts[1] == "LIN" || parts[1] == "lin") return linear_grid(lo, hi, static_cast<int>(n));
  throw ConfigError("--lambda-grid: spacing must be LOG or LIN");
}

std::vector<double> parse_scnr_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ConfigError("--scnr-db: expected LO:STEP:HI");
  const double lo = to_double(parts[0], "--scnr-db"), step = to_double(parts[1], "--scnr-db"),
               hi = to_double(parts[2], "--scnr-db");
  if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("--scnr-db: need STEP > 0 and HI >= LO");
  return step_grid(lo, step, hi);
}

Budget fast_budget(double pfa) {
  Budget b;
  b.threshold_trials = std::max<std::size_t>(10000, static_cast<std::size_t>(std::ceil(50.0 / pfa - 1e-9)));
  b.pd_trials = 1000;
  return b;
}

Scenario toeplitz_scenario(int N, int K, double one_lag, double theta_deg, double clutter_power) {
  Scenario s;
  s.N = N;
  s.K = K;
  s.clutter = ToeplitzClutter{clutter_power, one_lag};
  s.noise_power = 1.0;
  s.steering_deg = theta_deg;
  return s;
}

Scenario lowrank_scenario(int N, int K, double theta_deg) {
  Scenario s;
  s.N = N;
  s.K = K;
  LowRankClutter lr;
  lr.angles_deg = {0, 5, 5, 10, 25, 25, 30, 30, 60};
  lr.powers.assign(lr.angles_deg.size(), 10.0);
  s.clutter = lr;
  s.noise_power = 1.0;
  s.steering_deg = theta_deg;
  return s;
}

const std::vector<std::string>& reproduce_items() {
  static const std::vector<std::string> items{"fig1",  "fig2",  "fig5",  "fig6",  "fig7",   "fig8",  "fig9",
                                              "fig10", "fig11", "fig12", "fig13", "fig14", "table2", "table3"};
  return items;
}

std::vector<std::string> reproduce(const std::string& item, const ReproduceOptions& opt) {
  if (std::find(reproduce_items().begin(), reproduce_items().end(), item) == reproduce_items().end()) {
    throw ConfigError("unknown reproduce item \"" + item + "\"");
  }
  const Budget b = opt.fast ? fast_budget(opt.pfa) : Budget{};
  json cfg{{"item", item}, {"fast", opt.fast}, {"pfa", opt.pfa}, {"threshold_trials", b.threshold_trials},
           {"pd_trials", b.pd_trials}};
  OutputSink out((std::filesystem::path(opt.out_dir) / item).string(), opt.command_line, cfg, opt.seed);
  const std::vector<TargetKind> both{TargetKind::Swerling0, TargetKind::Swerling1};
  const auto scnr = step_grid(-5.0, 1.0, 25.0);

  if (item == "fig1") {
    std::vector<HistCase> cases = cfar_cases(1.5);
    histogram_block(out, "", DetectorKind::DlAmf, cases, b.threshold_trials, opt.seed, opt.workers, false);
  } else if (item == "fig2") {
    for (int scale : {1, 2}) {
      const ScenarioModel m = make_model(toeplitz_scenario(12 * scale, 24 * scale, 0.95, 20.0));
      const std::vector<DetectorSpec> dets{make_detector(DetectorKind::DlAmf, 1.5),
                                           make_detector(DetectorKind::DlScmBeta, 1.5),
                                           make_detector(DetectorKind::DlRaw, 1.5)};
      roc_block(out, "N" + std::to_string(m.N()) + "_K" + std::to_string(m.K()) + "_", m, dets, scnr, both, b,
                opt.seed, opt.workers, opt.pfa);
    }
  } else if (item == "fig5") {
    dl_figure(out, toeplitz_scenario(12, 48, 0.95, 20.0), {0.5, 20.0, 100.0}, b, opt.seed, opt.workers, opt.pfa);
  } else if (item == "fig6") {
    dl_figure(out, toeplitz_scenario(12, 48, 0.95, 5.0), {0.5, 20.0, 200.0}, b, opt.seed, opt.workers, opt.pfa);
  } else if (item == "fig7") {
    dl_figure(out, toeplitz_scenario(12, 13, 0.95, 5.0), {0.5, 20.0, 100.0}, b, opt.seed, opt.workers, opt.pfa);
  } else if (item == "fig8" || item == "fig9") {
    const DetectorKind k = item == "fig8" ? DetectorKind::CfarDlScmf : DetectorKind::CfarDlAmf;
    histogram_block(out, "", k, cfar_cases(1.5), b.threshold_trials, opt.seed, opt.workers, true);
  } else if (item == "fig10" || item == "fig12" || item == "fig14") {
    const ScenarioModel m = make_model(toeplitz_scenario(24, 48, 0.95, 20.0));
    std::vector<DetectorKind> kinds;
    if (item == "fig10") kinds = {DetectorKind::DlAmf, DetectorKind::CfarDlScmf, DetectorKind::CfarDlAmf};
    if (item == "fig12") kinds = {DetectorKind::ElAmf, DetectorKind::CfarElAmf};
    if (item == "fig14") kinds = {DetectorKind::OptCfarDlScmf, DetectorKind::OptCfarDlAmf};
    roc_block(out, "", m, build_detectors(kinds, 1.5, m, {}), scnr, both, b, opt.seed, opt.workers, opt.pfa);
  } else if (item == "fig11") {
    std::vector<HistCase> cases;
    for (double rho : {0.1, 0.5, 0.95}) cases.push_back({"rho" + short_number(rho), toeplitz_scenario(24, 48, rho, 20.0), 0.0});
    for (double pc : {1.0, 100.0})
      cases.push_back({"clutter_power" + short_number(pc), toeplitz_scenario(24, 48, 0.95, 20.0, pc), 0.0});
    histogram_block(out, "el_amf_", DetectorKind::ElAmf, cases, b.threshold_trials, opt.seed, opt.workers, true);
    histogram_block(out, "cfar_el_amf_", DetectorKind::CfarElAmf, cases, b.threshold_trials, opt.seed, opt.workers,
                    true);
  } else if (item == "fig13") {
    std::vector<HistCase> cases;
    for (double rho : {0.1, 0.5, 0.95}) cases.push_back({"rho" + short_number(rho), toeplitz_scenario(24, 48, rho, 20.0), 0.0});
    histogram_block(out, "opt_cfar_dl_scmf_", DetectorKind::OptCfarDlScmf, cases, b.threshold_trials, opt.seed,
                    opt.workers, true);
    histogram_block(out, "opt_cfar_dl_amf_", DetectorKind::OptCfarDlAmf, cases, b.threshold_trials, opt.seed,
                    opt.workers, true);
  } else if (item == "table2" || item == "table3") {
    for (int K : {48, 28}) {
      const Scenario sc = item == "table2" ? toeplitz_scenario(24, K, 0.95, 20.0) : lowrank_scenario(24, K, 20.0);
      loss_block(out, "K" + std::to_string(K) + "_", sc, b, opt.seed, opt.workers, opt.pfa);
    }
  }
  return out.finish();
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Diagonally loaded adaptive matched filters: theory, estimators and Monte Carlo harness"};
  app.require_subcommand(1);
  const std::string command_line = join_command_line(argc, argv);

  std::string config, detectors = "cfar-dl-amf", out_dir = "out", lambda_grid = "0.001:LOG:1000:400",
                      scnr_db = "-5:1:25", target = "both", item;
  double pfa = 1e-3, lambda = 1.5, pd_target = 0.5;
  std::size_t trials = 100000, pd_trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
  bool fast = false;
  OptConfig opt;

  auto add_common = [&](CLI::App* sub, bool mc) {
    sub->add_option("--out", out_dir, "output directory");
    if (!mc) return;
    sub->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--detector,--detectors", detectors, "detector tag(s), comma separated");
    sub->add_option("--pfa", pfa, "preassigned false-alarm probability");
    sub->add_option("--trials", trials, "threshold trials");
    sub->add_option("--pd-trials", pd_trials, "trials per detection point");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--lambda", lambda, "fixed loading factor");
    sub->add_option("--workers", workers, "worker threads (0: all cores)");
    sub->add_flag("--fast", fast, "reduced trial budget");
    sub->add_option("--lambda-max", opt.lambda_max, "optimizer search limit (0: 100 x mean eigenvalue)");
    sub->add_option("--grid-points", opt.grid_points, "optimizer grid size");
    sub->add_option("--tol", opt.tol, "optimizer relative tolerance on lambda");
  };

  auto* k = app.add_subcommand("kappa", "kappa(lambda) curve of a scenario");
  k->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
  k->add_option("--lambda-grid", lambda_grid, "LO:LOG|LIN:HI:N");
  k->add_option("--lambda-max", opt.lambda_max, "optimizer search limit");
  k->add_option("--grid-points", opt.grid_points, "optimizer grid size");
  k->add_option("--tol", opt.tol, "optimizer relative tolerance");
  add_common(k, false);

  auto* th = app.add_subcommand("threshold", "calibrate thresholds by Monte Carlo");
  add_common(th, true);

  auto* pd = app.add_subcommand("pd-sweep", "detection probability against SCNR");
  add_common(pd, true);
  pd->add_option("--scnr-db", scnr_db, "LO:STEP:HI in dB");
  pd->add_option("--target", target, "swerling0 | swerling1 | both");

  auto* lt = app.add_subcommand("loss-table", "SCNR loss relative to np at a detection probability");
  add_common(lt, true);
  lt->add_option("--pd-target", pd_target, "detection probability of the comparison");

  auto* rp = app.add_subcommand("reproduce", "emit every data series of one reproduction item");
  rp->add_option("item", item, "item tag")->required();
  rp->add_option("--out", out_dir, "output directory");
  rp->add_option("--seed", seed, "master seed");
  rp->add_option("--workers", workers, "worker threads");
  rp->add_option("--pfa", pfa, "preassigned false-alarm probability");
  rp->add_flag("--fast", fast, "reduced trial budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(kExitUsage, "usage", e.what());
  }

  try {
    json summary;
    if (k->parsed()) {
      const ScenarioDocument doc = load_scenario(config);
      const ScenarioModel m = make_model(doc.scenario);
      json cfg = to_json(doc);
      cfg["lambda_grid"] = lambda_grid;
      OutputSink out(out_dir, command_line, cfg, 0);
      kappa_table(out, "kappa.csv", m, parse_lambda_grid(lambda_grid));
      summary = kappa_summary(m, opt);
      out.manifest().set_extra("kappa", summary);
      summary["outputs"] = out.finish();
    } else if (rp->parsed()) {
      ReproduceOptions ro;
      ro.out_dir = out_dir;
      ro.fast = fast;
      ro.seed = seed;
      ro.workers = workers;
      ro.pfa = pfa;
      ro.command_line = command_line;
      summary["outputs"] = reproduce(item, ro);
    } else {
      const ScenarioDocument doc = load_scenario(config);
      const ScenarioModel m = make_model(doc.scenario);
      auto kinds = parse_detector_list(detectors);
      if (lt->parsed() && kinds.front() != DetectorKind::Np) kinds.insert(kinds.begin(), DetectorKind::Np);
      const auto dets = build_detectors(kinds, lambda, m, opt);
      Budget b{trials, pd_trials};
      if (fast) b = fast_budget(pfa);
      json cfg = to_json(doc);
      cfg["detectors"] = detectors;
      cfg["pfa"] = pfa;
      cfg["lambda"] = lambda;
      cfg["threshold_trials"] = b.threshold_trials;
      cfg["pd_trials"] = b.pd_trials;
      OutputSink out(out_dir, command_line, cfg, seed);
      if (th->parsed()) {
        const FormSet h0 = simulate_forms(m, dets, b.threshold_trials, seed, kPhaseThreshold, workers);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t d = 0; d < dets.size(); ++d) {
          const Threshold t = threshold_from_samples(h0.h0(d), pfa);
          rows.push_back({spec_label(dets[d]), format_number(t.tau), std::to_string(t.rank),
                          format_number(t.achieved_pfa.estimate), format_number(t.achieved_pfa.lo),
                          format_number(t.achieved_pfa.hi), std::to_string(b.threshold_trials)});
          summary["thresholds"][spec_label(dets[d])] = t.tau;
          out.manifest().add_tag(dets[d].tag());
        }
        out.table("thresholds.csv", {"detector", "tau", "rank", "achieved_pfa", "ci_lo", "ci_hi", "trials"}, rows);
      } else if (pd->parsed()) {
        roc_block(out, "", m, dets, parse_scnr_grid(scnr_db), parse_targets(target), b, seed, workers, pfa);
      } else {
        LossTableConfig lc;
        lc.threshold_trials = b.threshold_trials;
        lc.pd_trials = b.pd_trials;
        lc.seed = seed;
        lc.pfa = pfa;
        lc.pd_target = pd_target;
        lc.workers = workers;
        const auto rows = loss_table(m, dets, lc);
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows) {
          cells.push_back({r.tag, format_number(r.tau), format_number(r.scnr_db_swerling0),
                           format_number(r.scnr_db_swerling1), format_number(r.loss_db_swerling0),
                           format_number(r.loss_db_swerling1)});
          summary["loss_db"][r.tag] = {r.loss_db_swerling0, r.loss_db_swerling1};
          out.manifest().add_tag(r.tag);
        }
        out.table("loss_table.csv",
                  {"detector", "tau", "scnr_db_swerling0", "scnr_db_swerling1", "loss_db_swerling0",
                   "loss_db_swerling1"},
                  cells);
      }
      summary["outputs"] = out.finish();
    }
    std::cout << summary.dump(2) << std::endl;
    return kExitOk;
  } catch (const NumericalError& e) {
    return report_error(kExitNumerical, "numerical", e.what());
  } catch (const Error& e) {
    return report_error(kExitUsage, "config", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(kExitUsage, "io", e.what());
  } catch (const std::exception& e) {
    return report_error(kExitNumerical, "internal", e.what());
  }
}

}  // namespace dlcfar
