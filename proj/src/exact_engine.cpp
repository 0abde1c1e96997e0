#include "bulkq/exact_engine.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "bulkq/error.hpp"

namespace bulkq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kStartNodes = 64;
constexpr std::size_t kMaxNodes = std::size_t{1} << 20;
constexpr double kContourTol = 1e-10;

void require_nondegenerate(const QueueInstance& q, const char* op) {
  require(!q.degenerate(), ErrorCode::InvalidArgument, std::string(op) + ": demand is degenerate (A == 1)");
}

// Largest x in (lo, radius) reached by geometric steps; stays strictly below radius.
double step_up(double x, double step, double radius) {
  const double next = x + step;
  if (next < radius) return next;
  return 0.5 * (x + radius);
}

}  // namespace

double real_saddle(const QueueInstance& q) {
  require_nondegenerate(q, "saddle");
  const auto dg = [&](double x) { return q.s_g_prime(cplx(x, 0.0)).real(); };
  double lo = 1.0;
  double hi = 1.0;
  double step = 1.0 / q.s();
  bool found = false;
  for (int i = 0; i < 2000; ++i) {
    hi = step_up(lo, step, q.radius());
    if (!(hi > lo) || !std::isfinite(hi)) break;
    if (dg(hi) > 0.0) {
      found = true;
      break;
    }
    lo = hi;
    step *= 2.0;
  }
  require(found, ErrorCode::Domain,
          "no sign change of g' below the radius: A(z) has no mass above s (n * degree(X) <= s)");
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dg(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double find_r0(const QueueInstance& q) {
  const double xs = real_saddle(q);
  const auto h = [&](double x) { return q.s_g(cplx(x, 0.0)).real(); };
  double lo = xs;
  double hi = xs;
  double step = xs - 1.0;
  bool found = false;
  for (int i = 0; i < 2000; ++i) {
    hi = step_up(lo, step, q.radius());
    if (!(hi > lo) || !std::isfinite(hi)) break;
    if (h(hi) > 0.0) {
      found = true;
      break;
    }
    lo = hi;
    step *= 2.0;
  }
  require(found, ErrorCode::Domain, "find_r0: no sign change of z^{-s}A(z) - 1 found below the radius");
  for (int i = 0; i < 300 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? hi : lo) = mid;
  }
  // Newton polish on h(x) = -s ln x + log A(x).
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 5; ++i) {
    const double d = q.s_g_prime(cplx(x, 0.0)).real();
    const double dx = h(x) / d;
    const double nx = x - dx;
    if (!(nx > lo && nx < hi)) break;
    x = nx;
    if (std::fabs(dx) <= 1e-16 * x) break;
  }
  return x;
}

namespace {

struct RootOutcome {
  cplx z;
  int iterations = 0;
  double residual = 0.0;
  bool ok = false;
};

double root_residual(const QueueInstance& q, cplx z) {
  return std::abs(std::exp(static_cast<double>(q.s()) * std::log(z)) - q.a(z));
}

RootOutcome solve_root(const QueueInstance& q, int k, int max_iter) {
  const double theta = q.theta();
  const cplx omega = std::polar(1.0, kTwoPi * k / q.s());
  const auto map = [&](cplx z) { return omega * std::exp(theta * q.demand().log_eval(z)); };

  RootOutcome out;
  cplx z = 0.0;
  double last_step = std::numeric_limits<double>::infinity();
  int growth = 0;
  bool damp = false;
  int it = 0;
  for (; it < max_iter; ++it) {
    const cplx step = map(z) - z;
    const double len = std::abs(step);
    growth = len > last_step ? growth + 1 : 0;
    if (growth >= 3) damp = true;
    z += damp ? 0.5 * step : step;
    last_step = len;
    if (len < 1e-10) break;
  }
  out.iterations = it;

  for (int i = 0; i < 60; ++i) {
    const cplx image = map(z);
    const cplx f = z - image;
    const cplx df = 1.0 - theta * q.demand().log_derivative(z) * image;
    const cplx dz = f / df;
    z -= dz;
    if (std::abs(dz) <= 1e-16 * std::max(std::abs(z), 1e-300)) break;
  }
  out.z = z;
  out.residual = root_residual(q, z);
  const double tol = 1e-12 * std::max(1.0, std::abs(q.a(0.0)));
  out.ok = std::isfinite(out.residual) && out.residual <= tol && std::abs(z) < 1.0;
  return out;
}

}  // namespace

RootSet inside_roots(const QueueInstance& q, const RootOptions& opts) {
  require_nondegenerate(q, "inside_roots");
  require(q.demand().aperiodic(), ErrorCode::Domain,
          "inside_roots: demand support is periodic (gcd > 1), so z = 1 is not the only unit-modulus zero");
  RootSet out;
  out.r0 = find_r0(q);
  const int s = q.s();
  const int count = s - 1;
  std::vector<RootOutcome> results(static_cast<std::size_t>(std::max(count, 0)));

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(1, count / 64)));
  const auto work = [&](unsigned t) {
    for (int k = 1 + static_cast<int>(t); k <= count; k += static_cast<int>(threads)) {
      results[k - 1] = solve_root(q, k, opts.max_iterations);
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  out.inside_roots.reserve(results.size());
  for (int k = 1; k <= count; ++k) {
    const auto& r = results[k - 1];
    if (!r.ok) {
      std::ostringstream os;
      os << "inside_roots: no convergence for k = " << k << " (|z| = " << std::abs(r.z) << ", residual "
         << r.residual << ")";
      fail(ErrorCode::NoConvergence, os.str());
    }
    out.inside_roots.push_back(r.z);
    out.residual_max = std::max(out.residual_max, r.residual);
    out.condition = std::max(out.condition, 1.0 / std::abs(1.0 - r.z));
    out.iterations_max = std::max(out.iterations_max, r.iterations);
  }

  // Distinctness: compare each root with its neighbours in argument order.
  std::vector<cplx> sorted = out.inside_roots;
  std::sort(sorted.begin(), sorted.end(),
            [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
  const std::size_t m = sorted.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t d = 1; d <= std::min<std::size_t>(4, m - 1); ++d) {
      if (std::abs(sorted[i] - sorted[(i + d) % m]) < 1e-9) {
        fail(ErrorCode::IllConditioned, "inside_roots: two zeros closer than 1e-9 (multiple root suspected)");
      }
    }
  }
  return out;
}

double mean_exact(const QueueInstance& q, const RootSet& roots) {
  if (q.degenerate()) return 0.0;
  cplx sum = 0.0;
  for (cplx z : roots.inside_roots) {
    const cplx d = 1.0 - z;
    require(std::abs(d) >= 1e-12, ErrorCode::IllConditioned, "mean_exact: a zero lies within 1e-12 of z = 1");
    sum += 1.0 / d;
  }
  const double s = q.s();
  return q.sigma2_a() / (2.0 * (s - q.mu_a())) - (s - 1.0 + q.mu_a()) / 2.0 + sum.real();
}

namespace {

// log(w^s - A(w)) without overflow or cancellation in either regime.
cplx log_char(const QueueInstance& q, cplx w) {
  if (w == cplx(0.0)) return q.log_a(0.0) + cplx(0.0, std::numbers::pi);
  const cplx sg = q.s_g(w);
  if (sg.real() < 0.0) return static_cast<double>(q.s()) * std::log(w) + std::log(-cexpm1(sg));
  return q.log_a(w) + std::log(cexpm1(-sg));
}

}  // namespace

cplx pgf_product(const QueueInstance& q, const RootSet& roots, cplx w) {
  if (q.degenerate()) return 1.0;
  require(std::abs(w) < roots.r0, ErrorCode::Domain, "pgf_product: |w| must be below r0");
  if (w == cplx(1.0)) return 1.0;
  cplx lg = std::log(q.s() - q.mu_a()) + std::log(w - 1.0) - log_char(q, w);
  for (cplx z : roots.inside_roots) lg += std::log(w - z) - std::log(1.0 - z);
  return std::exp(lg);
}

double default_contour_radius(const QueueInstance&, double r0) { return std::sqrt(r0); }

namespace {

// Trapezoid rule for -(1/2pi) int_0^{2pi} f_i(z) s g'(z) z E/(1-E) dphi on |z| = R,
// with M doubled until every component settles.
template <std::size_t N, class F>
std::array<cplx, N> contour_trapezoid(const QueueInstance& q, double radius, F&& funcs, std::size_t* nodes_out) {
  const double s = q.s();
  const double n = q.n();
  const auto node_sum = [&](std::size_t m_total, std::size_t start, std::size_t stride) {
    std::array<cplx, N> acc{};
    for (std::size_t m = start; m < m_total; m += stride) {
      const cplx z = std::polar(radius, kTwoPi * static_cast<double>(m) / static_cast<double>(m_total));
      const cplx e = std::exp(q.s_g(z));
      const cplx kernel = (-s + n * z * q.demand().log_derivative(z)) * e / (1.0 - e);
      const std::array<cplx, N> f = funcs(z);
      for (std::size_t i = 0; i < N; ++i) acc[i] += f[i] * kernel;
    }
    return acc;
  };

  std::size_t m_total = kStartNodes;
  std::array<cplx, N> sum = node_sum(m_total, 0, 1);
  std::array<cplx, N> prev{};
  for (std::size_t i = 0; i < N; ++i) prev[i] = -sum[i] / static_cast<double>(m_total);
  while (true) {
    const std::size_t next = 2 * m_total;
    require(next <= kMaxNodes, ErrorCode::NoConvergence,
            "contour: trapezoid rule not converged at 2^20 nodes on radius 1+eps with eps = " +
                std::to_string(radius - 1.0) + "; try a different radius");
    const auto odd = node_sum(next, 1, 2);
    std::array<cplx, N> cur{};
    bool done = true;
    for (std::size_t i = 0; i < N; ++i) {
      sum[i] += odd[i];
      cur[i] = -sum[i] / static_cast<double>(next);
      if (!(std::abs(cur[i] - prev[i]) < kContourTol * std::max(1.0, std::abs(cur[i])))) done = false;
    }
    m_total = next;
    prev = cur;
    if (done) break;
  }
  if (nodes_out) *nodes_out = m_total;
  return prev;
}

double checked_radius(const QueueInstance& q, std::optional<double> radius, double* r0_out) {
  const double r0 = find_r0(q);
  if (r0_out) *r0_out = r0;
  const double r = radius.value_or(default_contour_radius(q, r0));
  require(r > 1.0 && r < r0, ErrorCode::Domain, "contour: radius must satisfy 1 < radius < r0");
  return r;
}

}  // namespace

ExactSummary contour_moments(const QueueInstance& q, std::optional<double> radius) {
  ExactSummary out;
  out.method = ExactMethod::Contour;
  if (q.degenerate()) return out;
  out.radius = checked_radius(q, radius, nullptr);
  const auto vals = contour_trapezoid<3>(
      q, out.radius,
      [](cplx z) {
        const cplx d = 1.0 - z;
        return std::array<cplx, 3>{1.0 / d, -z / (d * d), -clog1p(-1.0 / z)};
      },
      &out.nodes);
  out.mean = vals[0].real();
  out.variance = vals[1].real();
  out.p0 = std::exp(vals[2].real());
  return out;
}

cplx pgf_contour(const QueueInstance& q, cplx w, std::optional<double> radius) {
  if (q.degenerate()) return 1.0;
  const double r = checked_radius(q, radius, nullptr);
  require(std::abs(w) < r * (1.0 - 1e-12), ErrorCode::Domain, "pgf_contour: w must lie strictly inside the contour");
  if (w == cplx(1.0)) return 1.0;
  const auto v = contour_trapezoid<1>(
      q, r, [w](cplx z) { return std::array<cplx, 1>{clog1p(-w / z) - clog1p(-1.0 / z)}; }, nullptr);
  return std::exp(v[0]);
}

double pollaczek_identity_check(const QueueInstance& q, const RootSet& roots, std::span<const cplx> w_list,
                                std::optional<double> radius) {
  double gap = 0.0;
  for (cplx w : w_list) {
    const cplx a = pgf_contour(q, w, radius);
    const cplx b = pgf_product(q, roots, w);
    gap = std::max(gap, std::abs(a - b) / std::max(std::abs(b), 1e-300));
  }
  return gap;
}

std::vector<double> distribution(const QueueInstance& q, const RootSet& roots, int j_max) {
  require(j_max >= 0, ErrorCode::InvalidArgument, "distribution: j_max must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(j_max) + 1, 0.0);
  if (q.degenerate()) {
    out[0] = 1.0;
    return out;
  }
  std::size_t m = 64;
  while (m < 8 * (static_cast<std::size_t>(j_max) + 1)) m *= 2;
  const double rho_c = std::pow(10.0, -14.0 / static_cast<double>(m));

  fftw_complex* buf = fftw_alloc_complex(m);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  for (std::size_t k = 0; k <= m / 2; ++k) {
    const cplx w = std::polar(rho_c, kTwoPi * static_cast<double>(k) / static_cast<double>(m));
    const cplx v = pgf_product(q, roots, w);
    buf[k][0] = v.real();
    buf[k][1] = v.imag();
    if (k > 0 && k < m / 2) {
      buf[m - k][0] = v.real();
      buf[m - k][1] = -v.imag();
    }
  }
  fftw_execute(plan);
  double scale = 1.0 / static_cast<double>(m);
  for (int j = 0; j <= j_max; ++j) {
    out[j] = std::max(0.0, buf[j][0] * scale);
    scale /= rho_c;
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  return out;
}

ExactSummary exact_summary(const QueueInstance& q, const RootSet& roots, std::optional<double> radius) {
  ExactSummary c = contour_moments(q, radius);
  if (q.degenerate()) {
    c.method = ExactMethod::Both;
    return c;
  }
  const double mean_z = mean_exact(q, roots);
  const double p0_z = pgf_product(q, roots, 0.0).real();
  const auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); };
  c.cross_check_gap = std::max(rel(c.mean, mean_z), rel(c.p0, p0_z));
  c.mean = mean_z;
  c.p0 = p0_z;
  c.method = ExactMethod::Both;
  return c;
}

}  // namespace bulkq
