#include "bulkq/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bulkq/error.hpp"
#include "bulkq/exact_engine.hpp"
#include "bulkq/special_functions.hpp"

namespace bulkq {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

bool is_half(double alpha) { return std::fabs(alpha - 0.5) < 1e-12; }

void require_alpha_at_least_half(const Regime& r, const char* op) {
  require(r.alpha >= 0.5 - 1e-12, ErrorCode::Domain,
          std::string(op) + ": needs alpha >= 1/2; use mu_moderate_bound for alpha < 1/2");
}

void require_alpha_variance_range(const Regime& r, const char* op) {
  require(r.alpha >= 0.5 - 1e-12 && r.alpha < 1.0, ErrorCode::Domain, std::string(op) + ": needs alpha in [1/2, 1)");
}

double sigma(const Regime& r) { return std::sqrt(r.sigma2_x); }

struct LogDerivs {
  double l1, l2, l3;
};

LogDerivs log_derivs(const DemandPgf& x, double z) {
  const auto d = x.derivatives(z);
  const double l1 = d[1] / d[0];
  const double l2 = d[2] / d[0] - l1 * l1;
  const double l3 = d[3] / d[0] - 3.0 * d[1] * d[2] / (d[0] * d[0]) + 2.0 * l1 * l1 * l1;
  return {l1, l2, l3};
}

}  // namespace

SaddleInfo saddle_point(const QueueInstance& q, const Regime& r) {
  double z = 0.0;
  try {
    z = real_saddle(q);
  } catch (const Error& e) {
    std::ostringstream os;
    os << "saddle_point: bracket failure, g'(1) = " << q.s_g_prime(1.0).real() / q.s()
       << " < 0 and g' stays negative below the radius (" << e.what() << ")";
    fail(ErrorCode::NoConvergence, os.str());
  }
  const double theta = q.theta();
  for (int i = 0; i < 4; ++i) {
    const auto l = log_derivs(q.demand(), z);
    const double g1 = -1.0 / z + theta * l.l1;
    const double g2 = 1.0 / (z * z) + theta * l.l2;
    const double nz = z - g1 / g2;
    if (!(nz > 1.0) || std::fabs(nz - z) > 1e-6 * z) break;
    const bool done = std::fabs(nz - z) <= 1e-16 * z;
    z = nz;
    if (done) break;
  }
  const auto l = log_derivs(q.demand(), z);
  SaddleInfo sp;
  sp.z_sp = z;
  sp.residual = std::fabs(-1.0 / z + theta * l.l1);
  sp.g2_at = 1.0 / (z * z) + theta * l.l2;
  sp.g3_at = -2.0 / (z * z * z) + theta * l.l3;
  sp.g_at = q.s_g(z).real() / q.s();
  sp.B = std::exp(q.s() * sp.g_at);
  sp.c2 = -sp.g3_at / (6.0 * sp.g2_at);

  const double shift = r.gamma / std::pow(static_cast<double>(r.s), r.alpha);
  const double ratio = r.sigma2_x / r.mu_x;
  const auto d1 = q.demand().derivatives(1.0);
  sp.a1 = -shift;
  sp.a2 = ratio - shift * (ratio - 1.0);
  sp.a3 = -2.0 + (1.0 - shift) * (d1[3] / d1[1] - 3.0 * d1[2] + 2.0 * d1[1] * d1[1]);
  return sp;
}

StandardSaddle mu_standard_saddle(const QueueInstance& q, const SaddleInfo& sp) {
  const double dz = sp.z_sp - 1.0;
  StandardSaddle out;
  out.value = sp.B / (dz * dz * std::sqrt(2.0 * kPi * q.s() * sp.g2_at));
  out.near_critical = dz < 0.05;
  return out;
}

double mu_leading(const Regime& r) {
  require_alpha_at_least_half(r, "mu_leading");
  return 2.0 / kPi * sigma(r) * std::sqrt(r.s / (2.0 * r.mu_x)) * special::g0(r.d()).value;
}

double mu_simple(const Regime& r) {
  require_alpha_at_least_half(r, "mu_simple");
  return std::pow(static_cast<double>(r.s), r.alpha) * r.sigma2_x / (2.0 * r.mu_x * r.gamma);
}

double mu_three_term(const Regime& r) {
  require_alpha_at_least_half(r, "mu_three_term");
  const double s = r.s;
  const double a = r.alpha;
  return std::pow(s, a) * (r.sigma2_x / (2.0 * r.gamma * r.mu_x) +
                           sigma(r) * special::zeta(0.5) / (special::kSqrtTwoPi * r.mu_x) * std::pow(s, 0.5 - a) +
                           0.25 * r.gamma * std::pow(s, 1.0 - 2.0 * a));
}

ModerateBound mu_moderate_bound(const Regime& r) {
  require(r.alpha > 0.0 && r.alpha < 0.5, ErrorCode::Domain, "mu_moderate_bound: needs 0 < alpha < 1/2");
  ModerateBound out;
  out.b0 = r.b0();
  out.exponent = r.b0_squared() * std::pow(static_cast<double>(r.s), 1.0 - 2.0 * r.alpha);
  out.statement = "mu_Q = O(exp(-b^2 s^(1-2 alpha))) for every b < b0";
  return out;
}

Corrections correction_constants(double gamma, double mu, double sigma2, double x2, double x3) {
  const double a2 = sigma2 / mu;
  const double a3 = -2.0 + x3 / mu - 3.0 * x2 + 2.0 * mu * mu;
  const double g3 = gamma * gamma * gamma;
  Corrections c;
  c.c1 = 0.5 * gamma * (a3 / (a2 * a2) - (a2 - 1.0) / a2);
  c.c2 = g3 * (a2 - 1.0) / (2.0 * a2 * a2);
  c.c3 = -gamma * a3 / (3.0 * a2 * a2);
  c.c4 = g3 * a3 / (6.0 * a2 * a2 * a2) - g3 * (a2 - 1.0) / (2.0 * a2 * a2);
  return c;
}

double mu_corrected_half(const QueueInstance& q, const Regime& r) {
  require(is_half(r.alpha), ErrorCode::Domain, "mu_corrected_half: needs alpha = 1/2");
  const double b0 = r.b0();
  require(b0 < special::kSqrtTwoPi, ErrorCode::Domain, "mu_corrected_half: b0 must lie below sqrt(2 pi)");
  const auto d = q.demand().derivatives(1.0);
  const Corrections c = correction_constants(r.gamma, r.mu_x, r.sigma2_x, d[2], d[3]);
  const double g0 = special::g0(b0).value;
  const double g3 = special::g3(b0).value;
  const double g4 = special::g4(b0).value;
  const double pre = 2.0 * sigma(r) / kPi / std::sqrt(2.0 * r.mu_x);
  return pre * std::sqrt(static_cast<double>(r.s)) * g0 +
         pre * ((c.c1 + c.c3) * g0 - (c.c2 + b0 * b0 * c.c3) * g3 + c.c4 * g4);
}

double mu_corrected_poisson(const Regime& r) {
  require(is_half(r.alpha), ErrorCode::Domain, "mu_corrected_poisson: needs alpha = 1/2");
  const double b0 = r.gamma / std::sqrt(2.0);
  return std::sqrt(2.0 * r.s) / kPi * special::g0(b0).value -
         std::sqrt(2.0) * r.gamma / (3.0 * kPi) * special::g1(b0).value;
}

VarianceForms var_leading(const Regime& r) {
  require_alpha_variance_range(r, "var_leading");
  const double s = r.s;
  VarianceForms out;
  out.value = r.gamma * sigma(r) / kPi * std::sqrt(2.0 / r.mu_x) * std::pow(s, 1.5 - r.alpha) *
              special::g3(r.d()).value;
  if (is_half(r.alpha)) {
    const double b = r.b0();
    if (b < special::kSqrtTwoPi) {
      const double bracket = 1.0 / (8.0 * b * b) - 0.25 - b * b / 12.0 - 2.0 * special::zeta(-0.5) / kSqrtPi * b -
                             4.0 / kSqrtPi * special::zeta_weighted_series(-1.5, b, 3, 3);
      out.bracket = r.sigma2_x * s / r.mu_x * bracket;
    }
  } else {
    out.head = std::pow(s, 2.0 * r.alpha) * r.sigma2_x * r.sigma2_x / (4.0 * r.gamma * r.gamma * r.mu_x * r.mu_x);
  }
  return out;
}

EmptyForms p0_leading(const Regime& r) {
  require_alpha_variance_range(r, "p0_leading");
  EmptyForms out;
  out.ln_p0 = -special::f_of_beta(r.d() * std::sqrt(2.0)).value;
  const double b0 = r.b0();
  if (is_half(r.alpha)) {
    if (b0 < special::kSqrtTwoPi) {
      out.series = std::log(2.0 * b0) + special::zeta_weighted_series(0.5, b0, 1, 1) / kSqrtPi;
    }
  } else {
    out.log_form = -(r.alpha - 0.5) * std::log(static_cast<double>(r.s)) + std::log(2.0 * b0);
  }
  return out;
}

GrwCheck grw_consistency(const Regime& r) {
  require(is_half(r.alpha), ErrorCode::Domain, "grw_consistency: needs alpha = 1/2");
  GrwCheck out;
  out.beta = r.gamma * r.mu_x * std::sqrt(r.theta()) / sigma(r);
  require(out.beta > 0.0 && out.beta < special::kTwoSqrtPi, ErrorCode::Domain,
          "grw_consistency: beta must lie in (0, 2 sqrt(pi))");
  out.walk = sigma(r) * std::sqrt(r.n_effective()) * special::em_beta(out.beta);
  out.leading = mu_leading(r);
  out.gap = std::fabs(out.walk / out.leading - 1.0);
  return out;
}

AsymptoticSummary summarize(const QueueInstance& q, const Regime& r) {
  AsymptoticSummary out;
  std::ostringstream err;
  if (r.alpha >= 0.5 - 1e-12) {
    out.mu_leading = mu_leading(r);
    out.mu_simple = mu_simple(r);
    out.mu_three_term = mu_three_term(r);
    err << "mu_leading: relative O(s^-min(1,alpha)) [O(s^-1/2) at alpha=1/2]; "
        << "mu_simple: relative O(s^max(1/2-alpha,-1)); "
        << "mu_three_term: absolute O(s^(3/2-2 alpha)) after dropping the s^(3/2-3 alpha) bracket term";
    if (is_half(r.alpha) && r.b0() < special::kSqrtTwoPi) {
      out.mu_corrected = mu_corrected_half(q, r);
      err << "; mu_corrected: absolute O(s^-1/2)";
    }
    if (r.alpha < 1.0) {
      out.var_leading = var_leading(r).value;
      out.ln_p0 = p0_leading(r).ln_p0;
      err << "; var_leading: relative O(s^(alpha-1)) [O(s^-1/2) at alpha=1/2]"
          << "; ln_p0: relative O(s^(alpha-1)) [O(s^-1/2) at alpha=1/2]";
    }
  } else {
    const auto b = mu_moderate_bound(r);
    err << "alpha < 1/2: " << b.statement << " (b0^2 s^(1-2 alpha) = " << b.exponent << ")";
  }
  out.declared_error = err.str();
  return out;
}

}  // namespace bulkq
