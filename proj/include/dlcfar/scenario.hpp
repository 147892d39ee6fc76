#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dlcfar/random.hpp"
#include "dlcfar/spectrum.hpp"
#include "dlcfar/types.hpp"

namespace dlcfar {

struct SteeringVector {
  CVector entries;
  double theta_deg = 0.0;
};

// Linear array with half-wavelength spacing: s_k = exp(i pi k sin theta) / sqrt(N).
SteeringVector make_steering(int N, double theta_deg);

struct ToeplitzClutter {
  double power = 10.0;
  double one_lag = 0.95;
};

struct LowRankClutter {
  std::vector<double> angles_deg;
  std::vector<double> powers;
};

using ClutterModel = std::variant<ToeplitzClutter, LowRankClutter>;

struct Scenario {
  int N = 24;
  int K = 48;
  ClutterModel clutter = ToeplitzClutter{};
  double noise_power = 1.0;
  double steering_deg = 20.0;

  double c() const { return static_cast<double>(N) / K; }
  // Throws ConfigError on anything that cannot produce a valid model. K <= N is
  // allowed here (oracle-only runs); adaptive consumers check it themselves.
  void validate() const;
};

struct NoTarget {};
struct Swerling0 {
  Complex amplitude;
};
struct Swerling1 {
  double power = 0.0;
};
using TargetModel = std::variant<NoTarget, Swerling0, Swerling1>;

enum class Hypothesis { H0, H1 };

// Everything fixed per scenario: covariance, its square root, steering and q = s^H R^-1 s.
struct ScenarioModel {
  Scenario scenario;
  std::shared_ptr<const HermitianSpectrum> covariance;
  CMatrix sqrt_covariance;
  SteeringVector steering;
  double quad_inverse = 0.0;

  int N() const { return scenario.N; }
  int K() const { return scenario.K; }
};

CMatrix covariance_matrix(const Scenario& scenario);
HermitianSpectrum build_covariance(const Scenario& scenario);
ScenarioModel make_model(const Scenario& scenario);

// Raw draws of one trial, in stream order: clutter c0, unit target amplitude z_b,
// then the K secondary columns. Leaving the secondary out keeps c0 and z_b identical.
struct TrialDraw {
  CVector c0;
  Complex z_b;
  CMatrix secondary;
};

TrialDraw draw_trial(const ScenarioModel& model, RngStream& rng, bool with_secondary = true);

struct SampleSet {
  CVector primary;
  CMatrix secondary;
  Hypothesis hypothesis = Hypothesis::H0;
  std::uint64_t seed = 0;
};

// Target amplitude realised from a unit complex normal draw.
Complex target_amplitude(const TargetModel& target, Complex z_b);

SampleSet sample_dataset(const ScenarioModel& model, const TargetModel& target, Hypothesis hypothesis,
                         RngStream& rng);

CMatrix sample_covariance(const CMatrix& secondary);
HermitianSpectrum scm(const CMatrix& secondary);
HermitianSpectrum scm(const SampleSet& samples);

}  // namespace dlcfar
