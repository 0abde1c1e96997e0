#pragma once

// Per-source demand pgf X(z), the heavy-traffic scaling regime
// rho_s = 1 - gamma / s^alpha, and the concrete queue instance with aggregate
// demand A(z) = X(z)^n served at capacity s per period.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bulkq/complex_math.hpp"

namespace bulkq {

enum class DemandKind { Poisson, Geometric, Binomial, ExplicitPmf };

std::string_view to_string(DemandKind kind);

class DemandPgf {
 public:
  static DemandPgf poisson(double rate);
  /// P(X = j) = p (1-p)^j, j >= 0.
  static DemandPgf geometric(double success_prob);
  static DemandPgf binomial(int trials, double prob);
  /// pmf[j] = P(X = j); must sum to 1.
  static DemandPgf explicit_pmf(std::vector<double> pmf);

  DemandKind kind() const { return kind_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  /// Radius of convergence; +inf for entire pgfs.
  double radius() const { return radius_; }
  const std::vector<double>& pmf() const { return pmf_; }
  double param() const { return param_; }
  int trials() const { return trials_; }

  /// X^{(order)}(z), order in 0..3.
  cplx eval(cplx z, int order = 0) const;
  /// X, X', X'', X''' at a real point.
  std::array<double, 4> derivatives(double z) const;
  /// log X(z), analytic in the unit disk where X has no zeros there and
  /// accurate near z = 1.
  cplx log_eval(cplx z) const;
  /// d/dz log X(z).
  cplx log_derivative(cplx z) const;

  /// Real powers X(z)^n remain pgfs.
  bool infinitely_divisible() const;
  /// gcd of the support offsets; 1 means condition (14) holds; 0 for a point mass.
  int support_gcd() const;
  bool aperiodic() const { return support_gcd() == 1; }
  /// X(z) == 1 (no demand at all).
  bool degenerate_zero() const;
  /// Largest j with P(X = j) > 0, or nullopt for infinite support.
  std::optional<int> degree() const;

  std::string describe() const;

 private:
  DemandPgf() = default;
  void finalize_pmf_moments();

  DemandKind kind_ = DemandKind::Poisson;
  double param_ = 0.0;  // rate, success prob or binomial prob
  int trials_ = 0;
  std::vector<double> pmf_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double radius_ = 0.0;
};

/// Scaling point (s, alpha, gamma) together with the demand moments it is paired with.
struct Regime {
  int s = 1;
  double alpha = 0.5;
  double gamma = 1.0;
  double mu_x = 1.0;
  double sigma2_x = 1.0;

  static Regime create(int s, double alpha, double gamma, double mu_x, double sigma2_x);
  static Regime create(int s, double alpha, double gamma, const DemandPgf& demand) {
    return create(s, alpha, gamma, demand.mean(), demand.variance());
  }

  double rho() const;
  double theta() const { return rho() / mu_x; }
  double n_effective() const { return theta() * s; }
  double b0_squared() const { return gamma * gamma * mu_x / (2.0 * sigma2_x); }
  double b0() const;
  double d_squared() const;
  double d() const;
};

class QueueInstance {
 public:
  /// Requires mu_A = n mu_X < s; n must be an integer unless the demand is
  /// infinitely divisible.
  QueueInstance(DemandPgf demand, int s, double n);

  const DemandPgf& demand() const { return demand_; }
  int s() const { return s_; }
  double n() const { return n_; }
  double theta() const { return n_ / s_; }
  double mu_a() const { return n_ * demand_.mean(); }
  double sigma2_a() const { return n_ * demand_.variance(); }
  double rho() const { return mu_a() / s_; }
  double radius() const { return demand_.radius(); }
  bool degenerate() const { return demand_.degenerate_zero() || n_ == 0.0; }

  /// log A(z) = n log X(z).
  cplx log_a(cplx z) const { return n_ * demand_.log_eval(z); }
  cplx a(cplx z) const { return std::exp(log_a(z)); }
  /// s g(z) = -s log z + n log X(z), so exp(s g(z)) = z^{-s} A(z).
  cplx s_g(cplx z) const;
  /// s g'(z) = -s/z + n X'(z)/X(z).
  cplx s_g_prime(cplx z) const;
  /// P(A = j) > 0 for some j > s; needed for the outside zero r0.
  bool has_mass_above_capacity() const;

 private:
  DemandPgf demand_;
  int s_;
  double n_;
};

struct InstanceResult {
  QueueInstance instance;
  double n_used;
  double gamma_used;
  bool rounded;
  std::vector<std::string> warnings;
};

/// Builds the instance for a regime. Keeps n real for infinitely divisible
/// demand; otherwise rounds n and recomputes gamma so rho = 1 - gamma/s^alpha
/// holds exactly for the rounded n.
InstanceResult make_instance(const DemandPgf& demand, const Regime& regime);

struct ModelConfig {
  std::optional<DemandPgf> demand;
  std::optional<int> s;
  std::optional<double> alpha;
  std::optional<double> gamma;
};

/// key = value lines; '#' or ';' start comments. Keys: kind (poisson |
/// geometric | binomial | pmf), rate / mu, p, trials, prob, pmf (comma list),
/// s, alpha, gamma.
ModelConfig parse_model_config(std::string_view text);

}  // namespace bulkq
