#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "dlcfar/theory.hpp"
#include "test_util.hpp"

using namespace dlcfar;

TEST_CASE("bessel I0 against boost") {
  for (double x : {0.0, 1e-3, 0.5, 3.0, 17.0, 49.9, 50.1, 120.0, 600.0}) {
    CHECK(bessel_i0(x) == doctest::Approx(boost::math::cyl_bessel_i(0, x)).epsilon(1e-13));
    CHECK(bessel_i0e(x) == doctest::Approx(boost::math::cyl_bessel_i(0, x) * std::exp(-x)).epsilon(1e-13));
  }
  CHECK(bessel_i0(-2.0) == doctest::Approx(bessel_i0(2.0)));
  // large argument: I0(x) e^-x sqrt(2 pi x) -> 1 + 1/(8x)
  const double x = 1e4;
  CHECK(bessel_i0e(x) * std::sqrt(2.0 * std::acos(-1.0) * x) == doctest::Approx(1.0 + 1.0 / (8.0 * x)).epsilon(1e-8));
}

TEST_CASE("marcum Q closed forms") {
  for (double b : {0.0, 0.7, 2.0, 6.0}) CHECK(marcum_q(0.0, b) == doctest::Approx(std::exp(-0.5 * b * b)));
  for (double a : {0.0, 1.0, 30.0}) CHECK(marcum_q(a, 0.0) == 1.0);
  // Q(a,a) = (1 + e^{-a^2} I0(a^2)) / 2
  for (double a : {0.5, 2.0, 8.0}) {
    CHECK(marcum_q(a, a) == doctest::Approx(0.5 * (1.0 + bessel_i0e(a * a))).epsilon(1e-12));
  }
}

TEST_CASE("marcum Q against the noncentral chi-square distribution") {
  RngStream rng(21);
  for (int i = 0; i < 200; ++i) {
    const double a = 40.0 * rng.uniform(), b = 40.0 * rng.uniform();
    const boost::math::non_central_chi_squared d(2.0, a * a);
    const double ref = boost::math::cdf(boost::math::complement(d, b * b));
    CHECK(std::abs(marcum_q(a, b) - ref) < 1e-10);
  }
}

TEST_CASE("noncentral chi-square density integrates to its cdf") {
  const double nu = 3.0, s2 = 0.7;
  double acc = 0.0;
  const int n = 20000;
  const double hi = 12.0, h = hi / n;
  for (int i = 0; i < n; ++i) acc += h * ncx2_pdf((i + 0.5) * h, nu, s2);
  CHECK(acc == doctest::Approx(ncx2_cdf(hi, nu, s2)).epsilon(1e-6));
}

TEST_CASE("ROC formulas") {
  const double pfa = 1e-3;
  for (double S : {0.1, 3.0, 40.0}) {
    for (double k : {0.5, 0.9, 1.0}) {
      CHECK(roc_swerling1(S, k, pfa) == doctest::Approx(std::pow(pfa, 1.0 / (1.0 + k * S))).epsilon(1e-12));
      const boost::math::non_central_chi_squared d(2.0, 2.0 * k * S);
      const double ref = boost::math::cdf(boost::math::complement(d, -2.0 * std::log(pfa)));
      CHECK(roc_swerling0(S, k, pfa) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
  CHECK(roc(TargetKind::Swerling0, 0.0, 0.8, pfa) == doctest::Approx(pfa));
  CHECK(cfar_threshold(pfa) == doctest::Approx(-std::log(pfa)));
  CHECK(cfar_dl_pd(5.0, 0.8, cfar_threshold(pfa), TargetKind::Swerling1) ==
        doctest::Approx(roc_swerling1(5.0, 0.8, pfa)));
  CHECK(detection_loss_db(0.5) == doctest::Approx(10.0 * std::log10(2.0)));
  CHECK(db_to_linear(linear_to_db(7.0)) == doctest::Approx(7.0));
}

TEST_CASE("asymptotic false-alarm families") {
  const ScenarioModel m = make_model(toeplitz_scenario(12, 48, 0.95, 20.0));
  const AsymptoticParams p = deterministic_equivalents(*m.covariance, m.steering, 1.5, 48);
  CHECK(asymptotic_pfa(PfaFamily::Cfar, p, 6.9) == doctest::Approx(std::exp(-6.9)));
  CHECK(asymptotic_pfa(PfaFamily::DlAmf, p, 0.0) == doctest::Approx(1.0));
  CHECK(parse_pfa_family("dl-raw") == PfaFamily::Unnormalized);
  CHECK_THROWS_AS(parse_pfa_family("bogus"), ConfigError);
}

TEST_CASE("theory examples") {
  const ScenarioModel m = make_model(toeplitz_scenario(12, 48, 0.95, 20.0));
  const AsymptoticParams p = deterministic_equivalents(*m.covariance, m.steering, 1.5, 48);
  for (PfaFamily f : {PfaFamily::DlAmf, PfaFamily::ScmBeta, PfaFamily::Unnormalized, PfaFamily::Cfar})
    CHECK(asymptotic_pfa(f, p, 0.0) == 1.0);
  CHECK(asymptotic_pfa(PfaFamily::Cfar, p, 6.907755278982137) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(asymptotic_pfa(PfaFamily::ScmBeta, p, 2.0) ==
        doctest::Approx(std::exp(-m.quad_inverse / 0.75 / p.mu0 * 2.0)).epsilon(1e-12));
  CHECK(asymptotic_pfa(PfaFamily::Unnormalized, p, 2.0) == doctest::Approx(std::exp(-2.0 / p.mu0)).epsilon(1e-12));

  CHECK(roc_swerling0(0.0, 0.7, 1e-3) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(roc_swerling1(0.0, 0.7, 1e-3) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(roc_swerling1(9.0, 1.0, 1e-3) == doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-12));
  CHECK_THROWS_AS(roc_swerling0(1.0, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(roc_swerling1(1.0, 0.5, 0.0), DomainError);

  CHECK(cfar_dl_pd(0.0, 0.8, 3.0, TargetKind::Swerling0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  CHECK(cfar_dl_pd(0.0, 0.8, 3.0, TargetKind::Swerling1) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  CHECK(cfar_dl_pd(2.0, 0.5, 2.0, TargetKind::Swerling1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(cfar_dl_pd(4.0, 0.6, -std::log(1e-3), TargetKind::Swerling0) ==
        doctest::Approx(roc_swerling0(4.0, 0.6, 1e-3)).epsilon(1e-12));

  CHECK(detection_loss_db(1.0) == 0.0);
  CHECK(detection_loss_db(0.5) == doctest::Approx(3.0103).epsilon(1e-5));
  CHECK_THROWS_AS(detection_loss_db(0.0), DomainError);
  CHECK(cfar_threshold(1e-3) == doctest::Approx(6.907755).epsilon(1e-7));
  CHECK(cfar_threshold(1.0 - 1e-9) < 1e-8);
  CHECK_THROWS_AS(cfar_threshold(1.0), DomainError);
}
