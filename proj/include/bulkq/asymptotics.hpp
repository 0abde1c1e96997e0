#pragma once

// Heavy-traffic approximations for the mean, variance and empty-system
// probability of the bulk-service queue under rho_s = 1 - gamma/s^alpha.

#include <optional>
#include <string>

#include "bulkq/model.hpp"

namespace bulkq {

struct SaddleInfo {
  double z_sp = 1.0;
  double g_at = 0.0;   // g(z_sp), g = -ln z + theta ln X
  double g2_at = 0.0;  // g''(z_sp)
  double g3_at = 0.0;  // g'''(z_sp)
  double B = 1.0;      // exp(s g(z_sp))
  double a1 = 0.0;     // Taylor data of g at z = 1
  double a2 = 0.0;
  double a3 = 0.0;
  double c2 = 0.0;     // -g'''/(6 g'')
  double residual = 0.0;  // |g'(z_sp)|
};

SaddleInfo saddle_point(const QueueInstance& q, const Regime& r);

struct StandardSaddle {
  double value = 0.0;
  bool near_critical = false;  // z_sp - 1 < 0.05: the classical form is not trustworthy
};

/// Classical saddle-point mean, meant for fixed load (alpha = 0).
StandardSaddle mu_standard_saddle(const QueueInstance& q, const SaddleInfo& sp);

/// (2/pi) sigma sqrt(s/(2 mu)) G0(d(s)); alpha >= 1/2.
double mu_leading(const Regime& r);
/// s^alpha sigma^2 / (2 mu gamma); alpha >= 1/2.
double mu_simple(const Regime& r);
/// Three-term expansion of the mean; alpha >= 1/2.
double mu_three_term(const Regime& r);

struct ModerateBound {
  double b0 = 0.0;
  double exponent = 0.0;  // b0^2 s^{1-2 alpha}
  std::string statement;
};

/// Descriptor of the exponentially small mean for 0 < alpha < 1/2.
ModerateBound mu_moderate_bound(const Regime& r);

struct Corrections {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

/// Correction constants for alpha = 1/2 in terms of gamma, mu, sigma^2, X''(1), X'''(1).
Corrections correction_constants(double gamma, double mu, double sigma2, double x2, double x3);

/// Leading term plus O(1) correction, alpha = 1/2; b0 < sqrt(2 pi).
double mu_corrected_half(const QueueInstance& q, const Regime& r);
/// Closed form of the corrected mean for unit-rate Poisson demand.
double mu_corrected_poisson(const Regime& r);

struct VarianceForms {
  double value = 0.0;                  // (gamma sigma/pi) sqrt(2/mu) s^{3/2-alpha} G3(d)
  std::optional<double> head;          // s^{2 alpha} sigma^4/(4 gamma^2 mu^2), alpha in (1/2, 1)
  std::optional<double> bracket;       // zeta-series form, alpha = 1/2
};

/// alpha in [1/2, 1).
VarianceForms var_leading(const Regime& r);

struct EmptyForms {
  double ln_p0 = 0.0;                 // -F(d sqrt 2)
  std::optional<double> series;       // alpha = 1/2 zeta series
  std::optional<double> log_form;     // alpha in (1/2, 1): -(alpha-1/2) ln s + ln(2 b0)
};

/// alpha in [1/2, 1).
EmptyForms p0_leading(const Regime& r);

struct GrwCheck {
  double beta = 0.0;
  double walk = 0.0;     // sigma sqrt(n) E M_beta
  double leading = 0.0;  // mu_leading
  double gap = 0.0;      // |walk/leading - 1|
};

/// Gaussian random walk comparison; alpha = 1/2, beta = gamma mu sqrt(theta)/sigma < 2 sqrt(pi).
GrwCheck grw_consistency(const Regime& r);

struct AsymptoticSummary {
  std::optional<double> mu_leading;
  std::optional<double> mu_simple;
  std::optional<double> mu_three_term;
  std::optional<double> mu_corrected;
  std::optional<double> var_leading;
  std::optional<double> ln_p0;
  std::string declared_error;
};

/// Every approximation whose alpha-regime applies.
AsymptoticSummary summarize(const QueueInstance& q, const Regime& r);

}  // namespace bulkq
