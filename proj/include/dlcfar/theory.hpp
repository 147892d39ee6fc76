#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "dlcfar/rmt.hpp"

namespace dlcfar {

double bessel_i0(double x);
// exp(-|x|) I0(x); finite for every x.
double bessel_i0e(double x);

// First-order Marcum Q.
double marcum_q(double a, double b);

// Density of |z|^2 for complex z with |E z|^2 = nu and variance sigma2 per real component.
double ncx2_pdf(double x, double nu, double sigma2);
// 1 - Q(sqrt(nu)/sigma, sqrt(x)/sigma)
double ncx2_cdf(double x, double nu, double sigma2);

enum class PfaFamily { DlAmf, ScmBeta, Unnormalized, Cfar };
PfaFamily parse_pfa_family(std::string_view tag);

double asymptotic_pfa(PfaFamily family, const AsymptoticParams& p, double tau);

enum class TargetKind { Swerling0, Swerling1 };

double roc_swerling0(double S0, double kappa_val, double pfa_pre);
double roc_swerling1(double S1, double kappa_val, double pfa_pre);
double roc(TargetKind target, double S, double kappa_val, double pfa_pre);
double cfar_dl_pd(double S, double kappa_val, double tau, TargetKind target);

double detection_loss_db(double kappa_val);
double cfar_threshold(double pfa_pre);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace dlcfar
