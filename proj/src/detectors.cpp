#include "dlcfar/detectors.hpp"

#include <array>
#include <cmath>

#include "dlcfar/estimators.hpp"
#include "dlcfar/rmt.hpp"

namespace dlcfar {

namespace {

struct KindInfo {
  DetectorKind kind;
  std::string_view tag;
  bool oracle;
  LambdaSource source;
};

constexpr std::array<KindInfo, 12> kKinds{{
    {DetectorKind::Np, "np", true, LambdaSource::NotApplicable},
    {DetectorKind::ScmAmf, "scm-amf", false, LambdaSource::NotApplicable},
    {DetectorKind::DlAmf, "dl-amf", false, LambdaSource::Fixed},
    {DetectorKind::DlScmBeta, "dl-scm-beta", false, LambdaSource::Fixed},
    {DetectorKind::DlRaw, "dl-raw", false, LambdaSource::Fixed},
    {DetectorKind::CfarDlScmf, "cfar-dl-scmf", true, LambdaSource::Fixed},
    {DetectorKind::CfarDlAmf, "cfar-dl-amf", false, LambdaSource::Fixed},
    {DetectorKind::ElAmf, "el-amf", false, LambdaSource::ElEstimate},
    {DetectorKind::CfarElAmf, "cfar-el-amf", false, LambdaSource::ElEstimate},
    {DetectorKind::PersymAmf, "persym-amf", false, LambdaSource::NotApplicable},
    {DetectorKind::OptCfarDlScmf, "opt-cfar-dl-scmf", true, LambdaSource::OptOracle},
    {DetectorKind::OptCfarDlAmf, "opt-cfar-dl-amf", false, LambdaSource::OptEstimate},
}};

const KindInfo& info(DetectorKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k;
  throw DomainError("unknown detector kind");
}

std::shared_ptr<const OracleModel> make_oracle(const ScenarioModel& model) {
  auto o = std::make_shared<OracleModel>();
  o->R = model.covariance;
  o->steering = model.steering.entries;
  const RVector& rho = o->R->eigenvalues();
  const CMatrix& V = o->R->eigenvectors();
  o->r_inv_s = V * (rho.cwiseInverse().asDiagonal() * (V.adjoint() * o->steering));
  o->quad_inverse = model.quad_inverse;
  o->K = model.K();
  return o;
}

double oracle_mu0(const OracleModel& o, double lambda) {
  return deterministic_equivalents(o.R->weights(o.steering), lambda, o.K).mu0;
}

StatisticForm persym_form(const TrialView& view) {
  const CMatrix rp = persymmetrize(view.scm().matrix());
  Eigen::LDLT<CMatrix> ldlt(rp);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.vectorD().real().minCoeff() > 0.0)) {
    throw NumericalError("persym-amf: persymmetric covariance is singular");
  }
  const CVector x = ldlt.solve(view.steering());
  StatisticForm f;
  f.gain = view.steering().dot(x).real();
  f.offset = x.dot(view.primary());
  f.normalizer = f.gain;
  return f;
}

}  // namespace

std::string_view detector_tag(DetectorKind kind) { return info(kind).tag; }

DetectorKind parse_detector(std::string_view tag) {
  for (const auto& k : kKinds)
    if (k.tag == tag) return k.kind;
  throw ConfigError("unknown detector tag \"" + std::string(tag) + "\"");
}

std::vector<DetectorKind> parse_detector_list(std::string_view list) {
  std::vector<DetectorKind> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = list.find(',', pos);
    const std::string_view item = list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos);
    if (!item.empty()) out.push_back(parse_detector(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty detector list");
  return out;
}

const std::vector<DetectorKind>& all_detector_kinds() {
  static const std::vector<DetectorKind> all = [] {
    std::vector<DetectorKind> v;
    for (const auto& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return all;
}

bool is_oracle(DetectorKind kind) { return info(kind).oracle; }

bool takes_fixed_lambda(DetectorKind kind) { return info(kind).source == LambdaSource::Fixed; }

DetectorSpec make_detector(DetectorKind kind, double lambda, const ScenarioModel* model, const OptConfig& opt) {
  if (kind == DetectorKind::OptCfarDlScmf || kind == DetectorKind::OptCfarDlAmf) {
    if (kind == DetectorKind::OptCfarDlAmf) {
      DetectorSpec spec;
      spec.kind = kind;
      spec.lambda_source = LambdaSource::OptEstimate;
      spec.opt = opt;
      return spec;
    }
    if (model == nullptr) throw ConfigError("opt-cfar-dl-scmf needs the true covariance");
    return make_opt_detector(OptMode::Oracle, *model, opt);
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("detector: loading factor must be >= 0");
  DetectorSpec spec;
  spec.kind = kind;
  spec.lambda_source = info(kind).source;
  spec.lambda = takes_fixed_lambda(kind) ? lambda : 0.0;
  spec.opt = opt;
  if (is_oracle(kind)) {
    if (model == nullptr) throw ConfigError(spec.tag() + " needs the true covariance");
    spec.oracle = make_oracle(*model);
    if (kind == DetectorKind::CfarDlScmf) spec.oracle_mu0 = oracle_mu0(*spec.oracle, spec.lambda);
  }
  return spec;
}

DetectorSpec make_opt_detector(OptMode mode, const ScenarioModel& model, const OptConfig& opt) {
  DetectorSpec spec;
  spec.opt = opt;
  if (mode == OptMode::Adaptive) {
    spec.kind = DetectorKind::OptCfarDlAmf;
    spec.lambda_source = LambdaSource::OptEstimate;
    return spec;
  }
  spec.kind = DetectorKind::OptCfarDlScmf;
  spec.lambda_source = LambdaSource::OptOracle;
  spec.oracle = make_oracle(model);
  spec.lambda = lambda_opt(*model.covariance, model.steering, model.K(), opt).lambda_star;
  spec.oracle_mu0 = oracle_mu0(*spec.oracle, spec.lambda);
  return spec;
}

void check_support(const DetectorSpec& spec, int N, int K) {
  const std::string tag = spec.tag();
  switch (spec.kind) {
    case DetectorKind::Np:
      return;
    case DetectorKind::CfarDlScmf:
    case DetectorKind::OptCfarDlScmf:
      if (K <= N) throw ConfigError(tag + ": the deterministic equivalents need K > N (got N=" +
                                    std::to_string(N) + ", K=" + std::to_string(K) + ")");
      return;
    case DetectorKind::ScmAmf:
    case DetectorKind::DlScmBeta:
      if (K < N) throw ConfigError(tag + ": the SCM is singular when K < N");
      return;
    case DetectorKind::DlAmf:
    case DetectorKind::DlRaw:
      if (spec.lambda == 0.0 && K < N) throw ConfigError(tag + ": lambda = 0 with K < N leaves the SCM singular");
      return;
    case DetectorKind::PersymAmf:
      if (2 * K < N) throw ConfigError(tag + ": needs K >= N/2");
      return;
    case DetectorKind::CfarDlAmf:
    case DetectorKind::ElAmf:
    case DetectorKind::CfarElAmf:
    case DetectorKind::OptCfarDlAmf:
      if (K <= N) throw ConfigError(tag + ": the consistent estimators need K > N (got N=" + std::to_string(N) +
                                    ", K=" + std::to_string(K) + ")");
      return;
  }
}

TrialView::TrialView(const HermitianSpectrum* scm, int K, const CVector& s, const CVector& y)
    : scm_(scm), K_(K), s_(&s), y_(&y) {
  if (s.size() != y.size()) throw DomainError("detector: steering and primary differ in length");
  if (scm_ != nullptr) {
    if (scm_->dim() != s.size()) throw DomainError("detector: SCM and steering differ in dimension");
    a_ = scm_->project(s);
    o_ = scm_->project(y);
    weights_ = {scm_->eigenvalues(), a_.cwiseAbs2()};
  }
}

const HermitianSpectrum& TrialView::scm() const {
  if (scm_ == nullptr) throw DomainError("detector: adaptive statistic evaluated without secondary data");
  return *scm_;
}

double TrialView::beta(double lambda) const {
  const RVector& l = scm().eigenvalues();
  if (lambda == 0.0 && !(l.minCoeff() > 0.0)) throw NumericalError("detector: singular SCM");
  return (weights_.weights.array() / (l.array() + lambda)).sum();
}

Complex TrialView::alpha(double lambda) const {
  const RVector& l = scm().eigenvalues();
  if (lambda == 0.0 && !(l.minCoeff() > 0.0)) throw NumericalError("detector: singular SCM");
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) sum += std::conj(a_(i)) * o_(i) / (l(i) + lambda);
  return sum;
}

StatisticForm evaluate_form(const DetectorSpec& spec, const TrialView& view) {
  StatisticForm f;
  auto loaded = [&](double lambda) {
    f.lambda = lambda;
    f.gain = view.beta(lambda);
    f.offset = view.alpha(lambda);
  };
  auto estimated_mu0 = [&](double lambda) {
    return estimate_equivalents(view.weights(), lambda, view.N(), view.K()).mu0_hat;
  };

  switch (spec.kind) {
    case DetectorKind::Np:
      if (!spec.oracle) throw ConfigError("np: oracle covariance missing");
      f.gain = spec.oracle->quad_inverse;
      f.offset = spec.oracle->r_inv_s.dot(view.primary());
      f.normalizer = f.gain;
      return f;
    case DetectorKind::ScmAmf:
      loaded(0.0);
      f.normalizer = f.gain;
      return f;
    case DetectorKind::DlAmf:
      loaded(spec.lambda);
      f.normalizer = f.gain;
      return f;
    case DetectorKind::DlScmBeta:
      loaded(spec.lambda);
      f.normalizer = view.beta(0.0);
      return f;
    case DetectorKind::DlRaw:
      loaded(spec.lambda);
      f.normalizer = 1.0;
      return f;
    case DetectorKind::CfarDlScmf:
    case DetectorKind::OptCfarDlScmf:
      if (!spec.oracle) throw ConfigError(spec.tag() + ": oracle covariance missing");
      loaded(spec.lambda);
      f.normalizer = spec.oracle_mu0;
      return f;
    case DetectorKind::CfarDlAmf:
      loaded(spec.lambda);
      f.normalizer = estimated_mu0(spec.lambda);
      return f;
    case DetectorKind::ElAmf:
    case DetectorKind::CfarElAmf: {
      const double lam = el_lambda(view.weights().eigenvalues, view.N(), view.K()).lambda;
      loaded(lam);
      f.normalizer = spec.kind == DetectorKind::ElAmf ? f.gain : estimated_mu0(lam);
      return f;
    }
    case DetectorKind::OptCfarDlAmf: {
      const double lam = lambda_opt_hat(view.weights(), view.N(), view.K(), spec.opt).lambda_star;
      loaded(lam);
      f.normalizer = estimated_mu0(lam);
      return f;
    }
    case DetectorKind::PersymAmf:
      return persym_form(view);
  }
  throw DomainError("evaluate_form: unknown detector kind");
}

double evaluate(const DetectorSpec& spec, const HermitianSpectrum& scm, int K, const CVector& s, const CVector& y0) {
  return evaluate_form(spec, TrialView(&scm, K, s, y0)).value();
}

CMatrix persymmetrize(const CMatrix& m) {
  const Eigen::Index n = m.rows();
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = 0.5 * (m(i, j) + std::conj(m(n - 1 - i, n - 1 - j)));
  return out;
}

double stat_np(const HermitianSpectrum& R, const SteeringVector& s, const CVector& y0) {
  const RVector& rho = R.eigenvalues();
  if (!(rho.minCoeff() > 0.0)) throw NumericalError("stat_np: singular covariance");
  const CVector a = R.project(s.entries);
  const CVector o = R.project(y0);
  Complex num = 0.0;
  double q = 0.0;
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    num += std::conj(a(i)) * o(i) / rho(i);
    q += std::norm(a(i)) / rho(i);
  }
  return std::norm(num) / q;
}

double stat_amf(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0) {
  return stat_dl_family(scm, s, y0, 0.0, DlVariant::DlBeta);
}

double stat_dl_family(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0, double lambda,
                      DlVariant variant) {
  if (!(lambda >= 0.0)) throw DomainError("stat_dl_family: lambda must be >= 0");
  const TrialView view(&scm, 0, s.entries, y0);
  const double num = std::norm(view.alpha(lambda));
  switch (variant) {
    case DlVariant::DlBeta: return num / view.beta(lambda);
    case DlVariant::ScmBeta: return num / view.beta(0.0);
    case DlVariant::None: return num;
  }
  throw DomainError("stat_dl_family: unknown variant");
}

double stat_cfar_dl(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0, double lambda,
                    const CfarNormalizer& n) {
  if (!(lambda >= 0.0)) throw DomainError("stat_cfar_dl: lambda must be >= 0");
  const TrialView view(&scm, n.K, s.entries, y0);
  const double num = std::norm(view.alpha(lambda));
  if (n.source == CfarNormalizer::Source::Oracle) {
    if (n.R == nullptr) throw ConfigError("stat_cfar_dl: oracle normaliser needs R");
    return num / deterministic_equivalents(*n.R, s, lambda, n.K).mu0;
  }
  return num / estimate_equivalents(view.weights(), lambda, n.N, n.K).mu0_hat;
}

ElStatistic stat_el(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0, int N, int K,
                    bool cfar) {
  if (scm.dim() != N) throw DomainError("stat_el: N differs from the SCM dimension");
  DetectorSpec spec;
  spec.kind = cfar ? DetectorKind::CfarElAmf : DetectorKind::ElAmf;
  spec.lambda_source = LambdaSource::ElEstimate;
  const StatisticForm f = evaluate_form(spec, TrialView(&scm, K, s.entries, y0));
  return {f.value(), f.lambda};
}

double stat_persymmetric_amf(const HermitianSpectrum& scm, const SteeringVector& s, const CVector& y0) {
  return persym_form(TrialView(&scm, 0, s.entries, y0)).value();
}

}  // namespace dlcfar
