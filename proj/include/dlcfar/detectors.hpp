#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dlcfar/optimizer.hpp"
#include "dlcfar/scenario.hpp"
#include "dlcfar/spectrum.hpp"

namespace dlcfar {

enum class DetectorKind {
  Np,
  ScmAmf,
  DlAmf,
  DlScmBeta,
  DlRaw,
  CfarDlScmf,
  CfarDlAmf,
  ElAmf,
  CfarElAmf,
  PersymAmf,
  OptCfarDlScmf,
  OptCfarDlAmf,
};

enum class LambdaSource { Fixed, ElEstimate, OptOracle, OptEstimate, NotApplicable };

std::string_view detector_tag(DetectorKind kind);
DetectorKind parse_detector(std::string_view tag);
std::vector<DetectorKind> parse_detector_list(std::string_view comma_separated);
const std::vector<DetectorKind>& all_detector_kinds();

bool is_oracle(DetectorKind kind);
// Kinds whose loading factor must be supplied by the caller.
bool takes_fixed_lambda(DetectorKind kind);

// Clairvoyant knowledge handed only to oracle kinds.
struct OracleModel {
  std::shared_ptr<const HermitianSpectrum> R;
  CVector steering;
  CVector r_inv_s;
  double quad_inverse = 0.0;
  int K = 0;
};

struct DetectorSpec {
  DetectorKind kind = DetectorKind::ScmAmf;
  LambdaSource lambda_source = LambdaSource::NotApplicable;
  // Fixed loading, or the oracle optimum once resolved.
  double lambda = 0.0;
  // mu0 at lambda for the semi-clairvoyant kinds.
  double oracle_mu0 = 0.0;
  std::shared_ptr<const OracleModel> oracle;
  OptConfig opt;

  std::string tag() const { return std::string(detector_tag(kind)); }
};

// model is required for oracle kinds and never stored for adaptive ones.
DetectorSpec make_detector(DetectorKind kind, double lambda = 0.0, const ScenarioModel* model = nullptr,
                           const OptConfig& opt = {});

enum class OptMode { Oracle, Adaptive };
DetectorSpec make_opt_detector(OptMode mode, const ScenarioModel& model, const OptConfig& opt = {});

// Throws ConfigError if the detector cannot run with N cells and K samples.
void check_support(const DetectorSpec& spec, int N, int K);

// One dataset seen through the SCM eigenbasis: l_i, a = U^H s, o = U^H y.
class TrialView {
 public:
  // scm may be null when only the NP detector is evaluated; K is its sample count.
  TrialView(const HermitianSpectrum* scm, int K, const CVector& s, const CVector& y);

  bool has_scm() const { return scm_ != nullptr; }
  int N() const { return static_cast<int>(s_->size()); }
  int K() const { return K_; }
  const HermitianSpectrum& scm() const;
  const SpectralWeights& weights() const { return weights_; }
  const CVector& steering() const { return *s_; }
  const CVector& primary() const { return *y_; }

  // s^H (R_hat + lambda)^-1 s and s^H (R_hat + lambda)^-1 y
  double beta(double lambda) const;
  Complex alpha(double lambda) const;

 private:
  const HermitianSpectrum* scm_;
  int K_;
  const CVector* s_;
  const CVector* y_;
  CVector a_;
  CVector o_;
  SpectralWeights weights_;
};

// Every statistic is |s^H W y|^2 / n for a detector-specific Hermitian W and
// normaliser n. With y = b s + c0 it becomes |b gain + offset|^2 / n.
struct StatisticForm {
  double gain = 0.0;     // s^H W s
  Complex offset;        // s^H W y
  double normalizer = 1.0;
  double lambda = 0.0;   // loading actually used

  double value() const { return std::norm(offset) / normalizer; }
  double value(Complex b) const { return std::norm(b * gain + offset) / normalizer; }
};

StatisticForm evaluate_form(const DetectorSpec& spec, const TrialView& view);
// K is the number of secondary samples behind scm.
double evaluate(const DetectorSpec& spec, const HermitianSpectrum& scm, int K, const CVector& s, const CVector& y0);

CMatrix persymmetrize(const CMatrix& m);

double stat_np(const HermitianSpectrum& R, const SteeringVector& s, const CVector& y0);
double stat_amf(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0);

enum class DlVariant { DlBeta, ScmBeta, None };
double stat_dl_family(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0, double lambda,
                      DlVariant variant);

struct CfarNormalizer {
  enum class Source { Oracle, Estimated } source = Source::Estimated;
  const HermitianSpectrum* R = nullptr;  // oracle only
  int N = 0;
  int K = 0;
};
double stat_cfar_dl(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0, double lambda,
                    const CfarNormalizer& normalizer);

struct ElStatistic {
  double stat;
  double lambda_el;
};
ElStatistic stat_el(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0, int N, int K,
                    bool cfar);

double stat_persymmetric_amf(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0);

}  // namespace dlcfar
