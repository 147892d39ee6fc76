#include "dlcfar/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace dlcfar {

namespace {

// sum (x^2/4)^k / (k!)^2, all terms positive
double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// exp(-x) I0(x) for large x, Hankel expansion truncated at its smallest term
double i0e_asymptotic(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

constexpr double kSeriesLimit = 50.0;

// v[k] proportional to I_k(x) for k = 0..m, via Miller's backward recurrence,
// normalised so that v[0] equals i0.
std::vector<double> bessel_sequence(double x, int m, double i0) {
  const int start = m + 20 + static_cast<int>(std::sqrt(40.0 * (m + 1)));
  std::vector<double> w(start + 2, 0.0);
  w[start] = 1e-300;
  for (int k = start; k > 0; --k) {
    w[k - 1] = 2.0 * k / x * w[k] + w[k + 1];
    if (w[k - 1] > 1e250) {
      for (int j = k - 1; j <= start; ++j) w[j] *= 1e-250;
    }
  }
  const double scale = i0 / w[0];
  std::vector<double> v(m + 1);
  for (int k = 0; k <= m; ++k) v[k] = w[k] * scale;
  return v;
}

}  // namespace

double bessel_i0(double x) {
  x = std::abs(x);
  if (x <= 700.0) return i0_series(x);
  return std::exp(x) * i0e_asymptotic(x);
}

double bessel_i0e(double x) {
  x = std::abs(x);
  if (x <= kSeriesLimit) return std::exp(-x) * i0_series(x);
  return i0e_asymptotic(x);
}

double marcum_q(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("marcum_q: arguments must be nonnegative");
  if (b == 0.0) return 1.0;
  if (a == 0.0) return std::exp(-0.5 * b * b);

  const double x = a * b;
  // Below the switch the Bessel terms are used unscaled with the full Gaussian
  // prefactor; above it both are carried in exp(-x)-scaled form.
  const bool scaled = x >= 30.0;
  const double prefactor = scaled ? std::exp(-0.5 * (a - b) * (a - b)) : std::exp(-0.5 * (a * a + b * b));
  const double i0 = scaled ? bessel_i0e(x) : bessel_i0(x);
  if (a == b) return std::min(1.0, 0.5 * (1.0 + prefactor * i0));

  const int m = static_cast<int>(std::ceil(9.0 * std::sqrt(x) + 40.0));
  const std::vector<double> ik = bessel_sequence(x, m, i0);
  const double ratio = a < b ? a / b : b / a;
  double sum = 0.0, power = 1.0;
  const int first = a < b ? 0 : 1;
  if (first == 1) power = ratio;
  for (int k = first; k <= m; ++k) {
    const double term = power * ik[k];
    sum += term;
    power *= ratio;
    if (k > x && term < 1e-18 * std::max(sum, 1e-300)) break;
  }
  const double q = a < b ? prefactor * sum : 1.0 - prefactor * sum;
  return std::clamp(q, 0.0, 1.0);
}

double ncx2_pdf(double x, double nu, double sigma2) {
  if (!(sigma2 > 0.0) || !(nu >= 0.0)) throw DomainError("ncx2_pdf: requires sigma2 > 0, nu >= 0");
  if (x < 0.0) return 0.0;
  const double t = std::sqrt(nu * x) / sigma2;
  return std::exp(-(x + nu) / (2.0 * sigma2) + t) * bessel_i0e(t) / (2.0 * sigma2);
}

double ncx2_cdf(double x, double nu, double sigma2) {
  if (!(sigma2 > 0.0) || !(nu >= 0.0)) throw DomainError("ncx2_cdf: requires sigma2 > 0, nu >= 0");
  if (x <= 0.0) return 0.0;
  const double sigma = std::sqrt(sigma2);
  return 1.0 - marcum_q(std::sqrt(nu) / sigma, std::sqrt(x) / sigma);
}

PfaFamily parse_pfa_family(std::string_view tag) {
  if (tag == "dl-amf") return PfaFamily::DlAmf;
  if (tag == "dl-scm-beta") return PfaFamily::ScmBeta;
  if (tag == "dl-raw") return PfaFamily::Unnormalized;
  if (tag == "cfar") return PfaFamily::Cfar;
  throw ConfigError("unknown P_fa family \"" + std::string(tag) + "\"");
}

double asymptotic_pfa(PfaFamily family, const AsymptoticParams& p, double tau) {
  if (!(tau >= 0.0)) throw DomainError("asymptotic_pfa: threshold must be nonnegative");
  switch (family) {
    case PfaFamily::DlAmf: return std::exp(-p.psi / p.mu0 * tau);
    case PfaFamily::ScmBeta: return std::exp(-p.quad_inv / (1.0 - p.c) / p.mu0 * tau);
    case PfaFamily::Unnormalized: return std::exp(-tau / p.mu0);
    case PfaFamily::Cfar: return std::exp(-tau);
  }
  throw DomainError("asymptotic_pfa: unknown family");
}

namespace {
void check_roc_args(double S, double kappa_val, double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw DomainError("roc: pfa must lie in (0, 1)");
  if (!(S >= 0.0)) throw DomainError("roc: SCNR must be nonnegative");
  if (!(kappa_val > 0.0 && kappa_val <= 1.0 + 1e-12)) throw DomainError("roc: kappa must lie in (0, 1]");
}
}  // namespace

double roc_swerling0(double S0, double kappa_val, double pfa_pre) {
  check_roc_args(S0, kappa_val, pfa_pre);
  return marcum_q(std::sqrt(2.0 * S0 * kappa_val), std::sqrt(-2.0 * std::log(pfa_pre)));
}

double roc_swerling1(double S1, double kappa_val, double pfa_pre) {
  check_roc_args(S1, kappa_val, pfa_pre);
  return std::pow(pfa_pre, 1.0 / (1.0 + S1 * kappa_val));
}

double roc(TargetKind target, double S, double kappa_val, double pfa_pre) {
  return target == TargetKind::Swerling0 ? roc_swerling0(S, kappa_val, pfa_pre)
                                         : roc_swerling1(S, kappa_val, pfa_pre);
}

double cfar_dl_pd(double S, double kappa_val, double tau, TargetKind target) {
  if (!(tau >= 0.0)) throw DomainError("cfar_dl_pd: threshold must be nonnegative");
  if (!(S >= 0.0)) throw DomainError("cfar_dl_pd: SCNR must be nonnegative");
  if (!(kappa_val > 0.0)) throw DomainError("cfar_dl_pd: kappa must be positive");
  const double nu = S * kappa_val;
  if (target == TargetKind::Swerling0) return marcum_q(std::sqrt(2.0 * nu), std::sqrt(2.0 * tau));
  return std::exp(-tau / (1.0 + nu));
}

double detection_loss_db(double kappa_val) {
  if (!(kappa_val > 0.0)) throw DomainError("detection_loss_db: kappa must be positive");
  return -10.0 * std::log10(kappa_val);
}

double cfar_threshold(double pfa_pre) {
  if (!(pfa_pre > 0.0 && pfa_pre < 1.0)) throw DomainError("cfar_threshold: pfa must lie in (0, 1)");
  return -std::log(pfa_pre);
}

}  // namespace dlcfar
