#include "dlcfar/scenario.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

namespace dlcfar {

SteeringVector make_steering(int N, double theta_deg) {
  if (N < 1) throw DomainError("make_steering: N must be at least 1");
  const double phase = std::numbers::pi * std::sin(theta_deg * std::numbers::pi / 180.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  SteeringVector s;
  s.theta_deg = theta_deg;
  s.entries.resize(N);
  for (int k = 0; k < N; ++k) s.entries(k) = scale * std::polar(1.0, phase * k);
  return s;
}

void Scenario::validate() const {
  if (N < 1) throw ConfigError("scenario: N must be positive");
  if (K < 1) throw ConfigError("scenario: K must be positive");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw ConfigError("scenario: noise_power must be positive");
  }
  if (!std::isfinite(steering_deg)) throw ConfigError("scenario: steering_deg must be finite");
  if (const auto* t = std::get_if<ToeplitzClutter>(&clutter)) {
    if (!(t->power >= 0.0)) throw ConfigError("scenario: clutter power must be nonnegative");
    if (!(t->one_lag >= 0.0 && t->one_lag < 1.0)) {
      throw ConfigError("scenario: one_lag must lie in [0, 1)");
    }
  } else {
    const auto& lr = std::get<LowRankClutter>(clutter);
    if (lr.angles_deg.size() != lr.powers.size()) {
      throw ConfigError("scenario: low-rank angles and powers differ in length");
    }
    for (double p : lr.powers) {
      if (!(p >= 0.0)) throw ConfigError("scenario: clutter patch powers must be nonnegative");
    }
  }
}

CMatrix covariance_matrix(const Scenario& scenario) {
  scenario.validate();
  const int N = scenario.N;
  CMatrix R = CMatrix::Zero(N, N);
  if (const auto* t = std::get_if<ToeplitzClutter>(&scenario.clutter)) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) R(i, j) = t->power * std::pow(t->one_lag, std::abs(i - j));
  } else {
    const auto& lr = std::get<LowRankClutter>(scenario.clutter);
    for (std::size_t i = 0; i < lr.angles_deg.size(); ++i) {
      const CVector v = make_steering(N, lr.angles_deg[i]).entries;
      R += lr.powers[i] * v * v.adjoint();
    }
  }
  R.diagonal().array() += scenario.noise_power;
  return R;
}

HermitianSpectrum build_covariance(const Scenario& scenario) {
  HermitianSpectrum R(covariance_matrix(scenario));
  if (R.min_eigenvalue() < scenario.noise_power - 1e-10 * R.max_eigenvalue()) {
    throw ModelError("build_covariance: clutter part is not positive semidefinite");
  }
  return R;
}

ScenarioModel make_model(const Scenario& scenario) {
  ScenarioModel m;
  m.scenario = scenario;
  auto R = std::make_shared<HermitianSpectrum>(build_covariance(scenario));
  m.sqrt_covariance = R->sqrt();
  m.steering = make_steering(scenario.N, scenario.steering_deg);
  m.quad_inverse = R->quad_inverse(m.steering.entries);
  m.covariance = std::move(R);
  return m;
}

TrialDraw draw_trial(const ScenarioModel& model, RngStream& rng, bool with_secondary) {
  TrialDraw d;
  d.c0 = model.sqrt_covariance * rng.complex_normal(model.N());
  d.z_b = rng.complex_normal();
  if (with_secondary) d.secondary = model.sqrt_covariance * rng.complex_normal(model.N(), model.K());
  return d;
}

Complex target_amplitude(const TargetModel& target, Complex z_b) {
  if (const auto* t0 = std::get_if<Swerling0>(&target)) return t0->amplitude;
  if (const auto* t1 = std::get_if<Swerling1>(&target)) {
    if (!(t1->power >= 0.0)) throw DomainError("target: Swerling I power must be nonnegative");
    return std::sqrt(t1->power) * z_b;
  }
  return {0.0, 0.0};
}

SampleSet sample_dataset(const ScenarioModel& model, const TargetModel& target, Hypothesis hypothesis,
                         RngStream& rng) {
  TrialDraw d = draw_trial(model, rng);
  SampleSet out;
  out.hypothesis = hypothesis;
  out.seed = rng.seed();
  out.primary = std::move(d.c0);
  if (hypothesis == Hypothesis::H1) {
    out.primary += target_amplitude(target, d.z_b) * model.steering.entries;
  }
  out.secondary = std::move(d.secondary);
  return out;
}

CMatrix sample_covariance(const CMatrix& secondary) {
  if (secondary.cols() == 0) throw DomainError("scm: no secondary data");
  const Eigen::Index N = secondary.rows();
  CMatrix R = CMatrix::Zero(N, N);
  R.selfadjointView<Eigen::Lower>().rankUpdate(secondary, 1.0 / static_cast<double>(secondary.cols()));
  return R.selfadjointView<Eigen::Lower>();
}

HermitianSpectrum scm(const CMatrix& secondary) {
  HermitianSpectrum out(sample_covariance(secondary), HermitianSpectrum::Floor::kSemidefinite);
  if (secondary.cols() >= secondary.rows() && out.condition_number() > 1e12) {
    std::clog << "warning: sample covariance condition number " << out.condition_number()
              << " exceeds 1e12\n";
  }
  return out;
}

HermitianSpectrum scm(const SampleSet& samples) { return scm(samples.secondary); }

}  // namespace dlcfar
