#include "bulkq/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "bulkq/error.hpp"

namespace bulkq::special {
namespace {

using ld = long double;

constexpr ld kPiL = 3.141592653589793238462643383279502884L;
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;

// Euler-Maclaurin summation with N = 20 and ten Bernoulli corrections.
// Valid for every real s != 1; used only for s >= 0, where the partial sum is tame.
ld zeta_euler_maclaurin(ld s) {
  static constexpr std::array<ld, 10> kBernoulliOverFactorial = {
      1.0L / 6.0L / 2.0L,
      -1.0L / 30.0L / 24.0L,
      1.0L / 42.0L / 720.0L,
      -1.0L / 30.0L / 40320.0L,
      5.0L / 66.0L / 3628800.0L,
      -691.0L / 2730.0L / 479001600.0L,
      7.0L / 6.0L / 87178291200.0L,
      -3617.0L / 510.0L / 20922789888000.0L,
      43867.0L / 798.0L / 6402373705728000.0L,
      -174611.0L / 330.0L / 2432902008176640000.0L,
  };
  constexpr int N = 20;
  ld sum = 0.0L;
  for (int n = 1; n < N; ++n) sum += std::pow(static_cast<ld>(n), -s);
  const ld Nl = N;
  const ld n_pow = std::pow(Nl, -s);
  sum += Nl * n_pow / (s - 1.0L) + 0.5L * n_pow;
  ld rising = s;             // s (s+1) ... (s+2k-2)
  ld power = n_pow / Nl;     // N^{-s-2k+1}
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    sum += kBernoulliOverFactorial[k] * rising * power;
    rising *= (s + 2.0L * k + 1.0L) * (s + 2.0L * k + 2.0L);
    power /= Nl * Nl;
  }
  return sum;
}

struct LogValue {
  ld log_abs;
  int sign;  // -1, 0, +1
};

// sin(pi x / 2) with exact argument reduction.
ld sin_half_pi(ld x) {
  ld r = std::fmod(x / 2.0L, 2.0L);
  if (r < 0) r += 2.0L;
  if (r == 0.0L || r == 1.0L) return 0.0L;
  return std::sin(kPiL * r);
}

// log|zeta(x)| and sign, never overflowing.
LogValue zeta_log(ld x) {
  if (x >= 0.0L) {
    const ld v = zeta_euler_maclaurin(x);
    if (v == 0.0L) return {-std::numeric_limits<ld>::infinity(), 0};
    return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
  }
  // zeta(x) = 2^x pi^{x-1} sin(pi x/2) Gamma(1-x) zeta(1-x), with 1-x > 1.
  const ld sn = sin_half_pi(x);
  if (sn == 0.0L) return {-std::numeric_limits<ld>::infinity(), 0};
  const ld log_abs = x * std::log(2.0L) + (x - 1.0L) * std::log(kPiL) + std::log(std::fabs(sn)) +
                     std::lgamma(1.0L - x) + std::log(zeta_euler_maclaurin(1.0L - x));
  return {log_abs, sn > 0 ? 1 : -1};
}

constexpr std::size_t kMaxSeriesTerms = 20000;

// zeta(offset - r) for r = 0..kMaxSeriesTerms-1, built once per offset.
const std::vector<LogValue>& zeta_table(int offset_times_two) {
  auto build = [](ld offset) {
    std::vector<LogValue> t(kMaxSeriesTerms);
    for (std::size_t r = 0; r < t.size(); ++r) t[r] = zeta_log(offset - static_cast<ld>(r));
    return t;
  };
  static const std::vector<LogValue> half = build(0.5L);
  static const std::vector<LogValue> minus_half = build(-0.5L);
  static const std::vector<LogValue> minus_three_halves = build(-1.5L);
  switch (offset_times_two) {
    case 1: return half;
    case -1: return minus_half;
    case -3: return minus_three_halves;
    default: fail(ErrorCode::InvalidArgument, "zeta_table: unsupported offset");
  }
}

struct SeriesSum {
  double value = 0.0;
  std::size_t terms = 0;
  double bound = 0.0;
  bool converged = false;
};

// Sums sum_r sign(r) exp(log_term(r)) * zeta(offset - r), where log_term
// returns the log-magnitude of everything but the zeta factor and sign_term
// the sign of that remainder.
template <class LogTerm, class SignTerm>
SeriesSum zeta_series(int offset_times_two, LogTerm log_term, SignTerm sign_term) {
  const auto& table = zeta_table(offset_times_two);
  ld sum = 0.0L;
  ld prev_mag = 0.0L;
  SeriesSum out;
  int small_in_a_row = 0;
  for (std::size_t r = 0; r < kMaxSeriesTerms; ++r) {
    const LogValue& z = table[r];
    ld mag = 0.0L;
    if (z.sign != 0) {
      mag = std::exp(log_term(static_cast<ld>(r)) + z.log_abs);
      sum += static_cast<ld>(z.sign * sign_term(r)) * mag;
    }
    out.terms = r + 1;
    if (r >= 2 && mag < 1e-17L * std::fabs(sum)) {
      if (++small_in_a_row >= 2) {
        const ld q = prev_mag > 0 ? mag / prev_mag : 0.0L;
        out.bound = q < 1.0L ? static_cast<double>(mag * q / (1.0L - q))
                             : std::numeric_limits<double>::infinity();
        out.converged = true;
        break;
      }
    } else {
      small_in_a_row = 0;
    }
    prev_mag = mag;
  }
  if (!out.converged) out.bound = std::numeric_limits<double>::infinity();
  out.value = static_cast<double>(sum);
  return out;
}

inline int alternating(std::size_t r) { return (r % 2 == 0) ? 1 : -1; }

double kernel(double b, double t, int power) {
  const double x = b * b + t * t;
  const double d = -std::expm1(-x);
  const double e = std::exp(-x);
  return power == 1 ? e / d : e / (d * d);
}

// Fixed 30-point Gauss-Legendre panels. The integrands have their nearest
// singularities at t = +-ib, so panels are graded geometrically from the scale
// of b and then kept at width 1/2 out to t_max.
template <class F>
double integrate_panels(F f, double b, double t_max) {
  std::vector<double> pts = {0.0};
  for (double c = 0.5 * std::min(b, 1.0); c < 1.0; c *= 2.0) pts.push_back(c);
  for (double c = 1.0; c < t_max; c += 0.5) pts.push_back(c);
  pts.push_back(t_max);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(), [t_max](double p) { return p > t_max; }), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += boost::math::quadrature::gauss<double, 30>::integrate(f, pts[i], pts[i + 1]);
  }
  return total;
}

void check_b(double b, const char* name) {
  require(b > 0.0 && std::isfinite(b), ErrorCode::Domain, std::string(name) + ": argument must be > 0");
}

SeriesResult finish(double series, const SeriesSum& s, bool in_domain, double quadrature) {
  SeriesResult out;
  out.quadrature = quadrature;
  out.in_domain = in_domain;
  if (in_domain) {
    out.series = series;
    out.terms_used = s.terms;
    out.truncation_bound = s.bound;
    out.value = s.converged ? series : quadrature;
  } else {
    out.value = quadrature;
    out.truncation_bound = 0.0;
  }
  return out;
}

SeriesResult g_series_result(int k, double b) {
  check_b(b, "G_k");
  const double quad = g_quadrature(k, b);
  const bool in_domain = b < kSqrtTwoPi;
  if (!in_domain) return finish(0.0, {}, false, quad);

  const ld lb = std::log(static_cast<ld>(b));
  auto lf = [](ld r) { return std::lgamma(r + 1.0L); };
  SeriesSum s;
  double head = 0.0;
  double scale = kSqrtPi;
  switch (k) {
    case 0:
      s = zeta_series(-1, [&](ld r) { return (2 * r + 2) * lb - lf(r) - std::log((2 * r + 1) * (2 * r + 2)); },
                      alternating);
      head = kPi / (4 * b) + kPi / 4 * b + kSqrtPi / 2 * zeta(0.5);
      break;
    case 1:
      s = zeta_series(1, [&](ld r) { return 2 * r * lb - lf(r); }, alternating);
      head = kPi / (2 * b);
      scale = kSqrtPi / 2;
      break;
    case 2:
      s = zeta_series(-1, [&](ld r) { return (2 * r + 2) * lb - lf(r) - std::log(2 * r + 1); }, alternating);
      head = kPi / (4 * b) - kPi / 4 * b;
      scale = -kSqrtPi;
      break;
    case 3:
      s = zeta_series(-3,
                      [&](ld r) {
                        return (2 * r + 2) * lb - lf(r) - std::log((2 * r + 1) * (2 * r + 2) * (2 * r + 3));
                      },
                      alternating);
      head = kPi / (16 * b * b * b) - kPi / (8 * b) - kPi * b / 24 - zeta(-0.5) * kSqrtPi;
      scale = -2 * kSqrtPi;
      break;
    case 4:
      s = zeta_series(-3, [&](ld r) { return (2 * r + 2) * lb - lf(r) - std::log((2 * r + 1) * (2 * r + 2)); },
                      alternating);
      head = kPi / (16 * b * b * b) + kPi * b / 24 + 0.5 * zeta(-0.5) * kSqrtPi;
      break;
    case 5:
      s = zeta_series(-1, [&](ld r) { return 2 * r * lb - lf(r); }, alternating);
      head = kPi / (4 * b * b * b);
      scale = kSqrtPi / 2;
      break;
    case 6:
      s = zeta_series(-3, [&](ld r) { return (2 * r + 2) * lb - lf(r) - std::log(2 * r + 1); }, alternating);
      head = 3 * kPi / (16 * b * b * b) - kPi * b / 24;
      scale = -kSqrtPi;
      break;
    default:
      fail(ErrorCode::InvalidArgument, "G_k: k must be in 0..6");
  }
  s.bound *= std::fabs(scale);
  return finish(head + scale * s.value, s, true, quad);
}

}  // namespace

double zeta(double x) {
  require(std::isfinite(x), ErrorCode::Domain, "zeta: argument must be finite");
  require(x != 1.0, ErrorCode::Domain, "zeta: pole at x = 1");
  const LogValue v = zeta_log(static_cast<ld>(x));
  if (v.sign == 0) return 0.0;
  return static_cast<double>(v.sign * std::exp(v.log_abs));
}

double zeta_weighted_series(double offset, double b, int shift, int m) {
  require(b > 0.0 && b < kSqrtTwoPi, ErrorCode::Domain, "zeta series: need 0 < b < sqrt(2 pi)");
  require(m >= 0 && m <= 3, ErrorCode::InvalidArgument, "zeta series: m must be in 0..3");
  const int twice = static_cast<int>(std::lround(2.0 * offset));
  const ld lb = std::log(static_cast<ld>(b));
  const auto s = zeta_series(
      twice,
      [&](ld r) {
        ld l = (2 * r + shift) * lb - std::lgamma(r + 1.0L);
        for (int j = 1; j <= m; ++j) l -= std::log(2 * r + j);
        return l;
      },
      alternating);
  return s.value;
}

double erfc(double x) { return std::erfc(x); }

double lerch_phi(double z, double s_param, double v) {
  require(z > 0.0 && z < 1.0, ErrorCode::Domain, "lerch_phi: requires 0 < z < 1");
  require(v > 0.0, ErrorCode::Domain, "lerch_phi: requires v > 0");
  ld sum = 0.0L;
  ld zk = 1.0L;
  for (long k = 0;; ++k) {
    const ld term = zk / std::pow(static_cast<ld>(k) + v, static_cast<ld>(s_param));
    sum += term;
    zk *= z;
    const ld q = z * std::pow((k + v) / (k + 1.0L + v), static_cast<ld>(s_param));
    // Past the peak the ratio only decreases, so the geometric tail is a bound.
    if (q < 1.0L) {
      const ld next = term * q;
      if (next / (1.0L - q) < 1e-18L * sum) break;
    }
    if (zk == 0.0L) break;
  }
  return static_cast<double>(sum);
}

double g_quadrature(int k, double b, double t_max) {
  check_b(b, "G_k");
  require(k >= 0 && k <= 6, ErrorCode::InvalidArgument, "G_k: k must be in 0..6");
  const double b2 = b * b;
  auto f = [k, b, b2](double t) {
    const double t2 = t * t;
    switch (k) {
      case 0: return t2 / (b2 + t2) * kernel(b, t, 1);
      case 1: return kernel(b, t, 1);
      case 2: return b2 / (b2 + t2) * kernel(b, t, 1);
      case 3: return t2 / ((b2 + t2) * (b2 + t2)) * kernel(b, t, 1);
      case 4: return t2 / (b2 + t2) * kernel(b, t, 2);
      case 5: return kernel(b, t, 2);
      default: return b2 / (b2 + t2) * kernel(b, t, 2);
    }
  };
  return integrate_panels(f, b, t_max);
}

SeriesResult g_family(int k, double b) { return g_series_result(k, b); }
SeriesResult g0(double b) { return g_series_result(0, b); }
SeriesResult g1(double b) { return g_series_result(1, b); }
SeriesResult g2(double b) { return g_series_result(2, b); }
SeriesResult g3(double b) { return g_series_result(3, b); }
SeriesResult g4(double b) { return g_series_result(4, b); }
SeriesResult g5(double b) { return g_series_result(5, b); }
SeriesResult g6(double b) { return g_series_result(6, b); }

namespace {
template <class Weight>
double erfc_sum(double b, Weight weight) {
  ld sum = 0.0L;
  for (long k = 0;; ++k) {
    const double x = b * std::sqrt(static_cast<double>(k + 1));
    const ld term = weight(k) * static_cast<ld>(std::erfc(x));
    sum += term;
    if (x > 27.0 || (x > 1.0 && term < 1e-18L * sum)) break;
  }
  return static_cast<double>(sum);
}
}  // namespace

double g2_erfc_sum(double b) {
  check_b(b, "G2");
  return kPi / 2 * b * erfc_sum(b, [](long) { return 1.0L; });
}

double g6_erfc_sum(double b) {
  check_b(b, "G6");
  return kPi / 2 * b * erfc_sum(b, [](long k) { return static_cast<ld>(k + 1); });
}

double f_erfc_sum(double beta) {
  check_b(beta, "F");
  return 0.5 * erfc_sum(beta / std::sqrt(2.0), [](long k) { return 1.0L / static_cast<ld>(k + 1); });
}

double f_log_integral(double b) {
  check_b(b, "F");
  const double b2 = b * b;
  auto f = [b, b2](double t) {
    const double x = b2 + t * t;
    return b / (b2 + t * t) * std::log(-std::expm1(-x));
  };
  return integrate_panels(f, b, kQuadratureUpper) / kPi;
}

SeriesResult f_of_beta(double beta) {
  check_b(beta, "F");
  const double quad = -f_log_integral(beta / std::sqrt(2.0));
  const bool in_domain = beta < kTwoSqrtPi;
  if (!in_domain) return finish(0.0, {}, false, quad);
  const ld lbeta = std::log(static_cast<ld>(beta));
  const ld lhalf = std::log(0.5L);
  SeriesSum s = zeta_series(
      1, [&](ld r) { return r * lhalf + (2 * r + 1) * lbeta - std::lgamma(r + 1.0L) - std::log(2 * r + 1); },
      alternating);
  const double scale = -1.0 / kSqrtTwoPi;
  s.bound *= std::fabs(scale);
  const double series = -std::log(beta) - 0.5 * std::log(2.0) + scale * s.value;
  return finish(series, s, true, quad);
}

double em_beta(double beta) {
  require(beta > 0.0 && beta < kTwoSqrtPi, ErrorCode::Domain,
          "em_beta: series requires 0 < beta < 2 sqrt(pi); no quadrature fallback exists");
  const ld lhalf_b2 = std::log(0.5L * beta * beta);
  SeriesSum s = zeta_series(
      -1, [&](ld r) { return r * lhalf_b2 - std::lgamma(r + 1.0L) - std::log((2 * r + 1) * (2 * r + 2)); },
      alternating);
  require(s.converged, ErrorCode::NoConvergence, "em_beta: series did not converge");
  return 1.0 / (2 * beta) + zeta(0.5) / kSqrtTwoPi + beta / 4 + beta * beta / kSqrtTwoPi * s.value;
}

}  // namespace bulkq::special
