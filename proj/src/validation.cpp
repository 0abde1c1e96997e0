#include "bulkq/validation.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "bulkq/asymptotics.hpp"
#include "bulkq/error.hpp"
#include "bulkq/exact_engine.hpp"
#include "bulkq/reference_queues.hpp"
#include "bulkq/simulator.hpp"
#include "bulkq/special_functions.hpp"

namespace bulkq {

namespace {

struct Check {
  bool ok;
  std::string detail;
};

std::string fmt(const char* label, double v) {
  std::ostringstream os;
  os.precision(3);
  os << label << " = " << std::scientific << v;
  return os.str();
}

Check bound(const char* label, double v, double tol) { return {v <= tol, fmt(label, v)}; }

QueueInstance poisson_instance(int s, double alpha, double gamma) {
  const auto x = DemandPgf::poisson(1.0);
  return make_instance(x, Regime::create(s, alpha, gamma, x)).instance;
}

std::vector<double> b_grid() {
  std::vector<double> out;
  for (int i = 1; i <= 48; ++i) out.push_back(0.05 * i);
  return out;
}

}  // namespace

std::vector<PropertyResult> run_validation_suite() {
  using special::g_family;
  std::vector<std::pair<std::string, std::function<Check()>>> checks;
  const auto add = [&](std::string name, std::function<Check()> f) { checks.emplace_back(std::move(name), std::move(f)); };

  add("zeta_reference_values", [] {
    const double e = std::max({std::fabs(special::zeta(0.0) + 0.5), std::fabs(special::zeta(-1.0) + 1.0 / 12.0),
                               std::fabs(special::zeta(0.5) + 1.4603545088095868)});
    return bound("max error", e, 1e-13);
  });
  add("erfc_reference_values", [] {
    const double e = std::max(std::fabs(special::erfc(0.0) - 1.0), std::fabs(special::erfc(1.0) - 0.15729920705028513));
    return bound("max error", e, 1e-15);
  });
  add("g0_equals_g1_minus_g2", [] {
    double e = 0;
    for (double b : b_grid()) e = std::max(e, std::fabs(g_family(0, b).value - g_family(1, b).value + g_family(2, b).value));
    return bound("max gap", e, 1e-12);
  });
  add("g4_equals_g5_minus_g6", [] {
    double e = 0;
    for (double b : b_grid()) e = std::max(e, std::fabs(g_family(4, b).value - g_family(5, b).value + g_family(6, b).value));
    return bound("max gap", e, 1e-12);
  });
  add("g3_equals_g2_over_2b2_minus_g4", [] {
    double e = 0;
    for (double b : b_grid())
      e = std::max(e, std::fabs(g_family(3, b).value - (g_family(2, b).value / (2 * b * b) - g_family(4, b).value)));
    return bound("max gap", e, 1e-10);
  });
  add("g_series_matches_quadrature", [] {
    double e = 0;
    for (double b : b_grid())
      for (int k = 0; k <= 6; ++k) {
        const auto r = g_family(k, b);
        e = std::max(e, std::fabs(r.series - r.quadrature));
      }
    return bound("max gap", e, 1e-9);
  });
  add("f_series_matches_quadrature", [] {
    double e = 0;
    for (double b : b_grid()) {
      const auto r = special::f_of_beta(b * std::sqrt(2.0));
      e = std::max(e, std::fabs(r.value + special::f_log_integral(b)));
    }
    return bound("max gap", e, 1e-9);
  });
  add("g2_erfc_sum_matches_series", [] {
    double e = 0;
    for (double b : {0.3, 0.7, 1.5}) e = std::max(e, std::fabs(special::g2(b).value - special::g2_erfc_sum(b)));
    return bound("max gap", e, 1e-12);
  });
  add("em_beta_small_beta_asymptote", [] {
    const double b = 1e-3;
    const double head = 1.0 / (2 * b) + special::zeta(0.5) / special::kSqrtTwoPi;
    return bound("relative gap", std::fabs(special::em_beta(b) / head - 1.0), 1e-3);
  });
  add("pgf_normalization_and_moments", [] {
    const DemandPgf xs[] = {DemandPgf::poisson(1.3), DemandPgf::geometric(0.4), DemandPgf::binomial(5, 0.3),
                            DemandPgf::explicit_pmf({0.2, 0.5, 0.3})};
    double e = 0;
    for (const auto& x : xs) {
      const auto d = x.derivatives(1.0);
      e = std::max({e, std::fabs(d[0] - 1.0), std::fabs(d[1] - x.mean()),
                    std::fabs(d[2] + d[1] - d[1] * d[1] - x.variance())});
    }
    return bound("max error", e, 1e-12);
  });
  add("inside_root_count_and_location", [] {
    for (int s : {2, 10, 50, 200}) {
      const auto q = poisson_instance(s, 0.5, 1.0);
      const auto r = inside_roots(q);
      if (static_cast<int>(r.inside_roots.size()) != s - 1) return Check{false, "wrong root count"};
      for (cplx z : r.inside_roots)
        if (std::abs(z) >= 1.0) return Check{false, "root outside unit disk"};
    }
    return Check{true, "s in {2,10,50,200}"};
  });
  add("inside_roots_conjugate_closed", [] {
    const auto q = poisson_instance(50, 0.5, 1.0);
    const auto r = inside_roots(q);
    double e = 0;
    for (cplx z : r.inside_roots) {
      double best = 1e300;
      for (cplx w : r.inside_roots) best = std::min(best, std::abs(std::conj(z) - w));
      e = std::max(e, best);
    }
    return bound("max conjugate miss", e, 1e-10);
  });
  add("inside_root_residuals", [] {
    const auto q = poisson_instance(100, 0.5, 0.1);
    return bound("residual_max", inside_roots(q).residual_max, 1e-12);
  });
  add("r0_solves_characteristic_equation", [] {
    const auto q = poisson_instance(10, 0.5, 1.0);
    const double r0 = find_r0(q);
    const double rel = std::fabs(std::expm1(q.s_g(r0).real()));
    return Check{rel <= 1e-12 && r0 > 1.0, fmt("relative residual", rel)};
  });
  add("contour_mean_matches_zeros", [] {
    double e = 0;
    for (double g : {1.0, 0.1})
      for (int s : {5, 10, 20, 50}) {
        const auto q = poisson_instance(s, 0.5, g);
        e = std::max(e, exact_summary(q, inside_roots(q)).cross_check_gap);
      }
    return bound("max relative gap", e, 1e-8);
  });
  add("product_and_contour_pgf_agree", [] {
    const auto q = poisson_instance(10, 0.5, 1.0);
    const auto r = inside_roots(q);
    const double eps = default_contour_radius(q, r.r0) - 1.0;
    const cplx ws[] = {0.0, 0.3, 0.9, 1.0 + 0.5 * eps, cplx(0.2, 0.5)};
    return bound("max relative gap", pollaczek_identity_check(q, r, ws), 1e-8);
  });
  add("pgf_normalization_and_empty_mass", [] {
    const auto q = poisson_instance(20, 0.5, 1.0);
    const auto r = inside_roots(q);
    const double one = pgf_product(q, r, 1.0).real();
    const double p0 = pgf_product(q, r, 0.0).real();
    return Check{one == 1.0 && p0 > 0.0 && p0 < 1.0, fmt("Q(0)", p0)};
  });
  add("pgf_derivative_matches_mean", [] {
    const auto q = poisson_instance(10, 0.5, 1.0);
    const auto r = inside_roots(q);
    const double h = 1e-5;
    const double d = (pgf_product(q, r, 1.0 + h).real() - pgf_product(q, r, 1.0 - h).real()) / (2 * h);
    return bound("relative gap", std::fabs(d / mean_exact(q, r) - 1.0), 1e-6);
  });
  add("distribution_normalized_with_matching_mean", [] {
    const auto q = poisson_instance(10, 0.5, 1.0);
    const auto r = inside_roots(q);
    const double mu = mean_exact(q, r);
    const auto p = distribution(q, r, static_cast<int>(50 * (1 + mu)));
    double total = 0, mean = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      total += p[j];
      mean += j * p[j];
    }
    const bool ok = total >= 1 - 1e-8 && total <= 1 + 1e-10 && std::fabs(mean - mu) <= 1e-6;
    return Check{ok, fmt("mean gap", std::fabs(mean - mu))};
  });
  add("mean_increases_with_load", [] {
    double prev = -1;
    for (double g : {2.0, 1.5, 1.0, 0.5, 0.2}) {
      const auto q = poisson_instance(20, 0.5, g);
      const double m = mean_exact(q, inside_roots(q));
      if (!(m > prev)) return Check{false, "not increasing"};
      prev = m;
    }
    return Check{true, "gamma grid {2,1.5,1,0.5,0.2}"};
  });
  add("poisson_saddle_point_exact", [] {
    const auto x = DemandPgf::poisson(1.0);
    const auto reg = Regime::create(100, 0.5, 1.0, x);
    const auto q = make_instance(x, reg).instance;
    const auto sp = saddle_point(q, reg);
    const double e = std::fabs(sp.z_sp * q.theta() - 1.0);
    return Check{e <= 1e-14 && sp.residual <= 1e-12, fmt("|z_sp theta - 1|", e)};
  });
  add("general_correction_reduces_to_poisson_form", [] {
    const auto x = DemandPgf::poisson(1.0);
    double e = 0;
    for (double g : {1.0, 0.1})
      for (int s : {10, 100, 1000}) {
        const auto reg = Regime::create(s, 0.5, g, x);
        const auto q = make_instance(x, reg).instance;
        e = std::max(e, std::fabs(mu_corrected_half(q, reg) - mu_corrected_poisson(reg)));
      }
    return bound("max gap", e, 1e-10);
  });
  add("variance_bracket_equals_g3_form", [] {
    const auto reg = Regime::create(100, 0.5, 1.0, 1.0, 1.0);
    const auto v = var_leading(reg);
    return bound("relative gap", std::fabs(*v.bracket / v.value - 1.0), 1e-8);
  });
  add("empty_probability_series_equals_minus_f", [] {
    const auto reg = Regime::create(100, 0.5, 1.0, 1.0, 1.0);
    const auto p = p0_leading(reg);
    return bound("gap", std::fabs(*p.series - p.ln_p0), 1e-12);
  });
  add("leading_mean_scales_with_sqrt_s", [] {
    const double base = mu_leading(Regime::create(10, 0.5, 1.0, 1.0, 1.0)) / std::sqrt(10.0);
    double e = 0;
    for (int s : {100, 1000, 10000})
      e = std::max(e, std::fabs(mu_leading(Regime::create(s, 0.5, 1.0, 1.0, 1.0)) / std::sqrt(1.0 * s) / base - 1));
    return bound("relative spread", e, 1e-12);
  });
  add("walk_leading_terms_agree", [] {
    const auto reg = Regime::create(400, 0.5, 1.0, 2.0, 3.0);
    const double lhs = std::sqrt(reg.sigma2_x) * std::sqrt(reg.s / (2 * reg.mu_x)) / (2 * reg.b0());
    const double beta = reg.gamma * reg.mu_x * std::sqrt(reg.theta()) / std::sqrt(reg.sigma2_x);
    const double rhs = std::sqrt(reg.sigma2_x) * std::sqrt(reg.n_effective()) / (2 * beta);
    return bound("relative gap", std::fabs(lhs / rhs - 1.0), 1e-12);
  });
  add("mu_simple_inverse_in_gamma", [] {
    const double a = mu_simple(Regime::create(100, 0.75, 0.1, 1.0, 1.0));
    const double b = mu_simple(Regime::create(100, 0.75, 0.2, 1.0, 1.0));
    return bound("relative gap", std::fabs(a / b - 2.0) / 2.0, 1e-14);
  });
  add("erlang_c_small_cases", [] {
    const double e = std::max(std::fabs(erlang_c_mean_queue(2, 0.5) - 1.0 / 3.0),
                              std::fabs(erlang_c_mean_queue(1, 0.7) - 0.49 / 0.3));
    return bound("max error", e, 1e-14);
  });
  add("erlang_c_recurrence_matches_direct_sum", [] {
    double e = 0;
    for (int s : {1, 5, 20, 80, 170})
      for (double rho : {0.3, 0.9, 0.99})
        e = std::max(e, std::fabs(erlang_c_mean_queue(s, rho) / erlang_c_mean_queue_direct(s, rho) - 1.0));
    return bound("max relative gap", e, 1e-12);
  });
  add("erlang_c_increasing_in_load", [] {
    double prev = 0;
    for (double rho : {0.5, 0.7, 0.9, 0.95, 0.99}) {
      const double v = erlang_c_mean_queue(50, rho);
      if (!(v > prev)) return Check{false, "not increasing"};
      prev = v;
    }
    return Check{true, "s = 50"};
  });
  add("mms_slope_tracks_alpha", [] {
    const std::vector<int> grid{10, 32, 100, 316, 1000, 3162, 10000};
    double e = 0;
    for (double a : {0.5, 0.75, 0.9}) e = std::max(e, std::fabs(slope_fit(a, 0.1, grid) - a));
    return bound("max slope error", e, 0.05);
  });
  add("simulation_empty_system", [] {
    const QueueInstance q(DemandPgf::explicit_pmf({1.0}), 3, 2.0);
    SimConfig c;
    c.warmup_periods = 0;
    c.measured_periods = 2000;
    const auto e = simulate(q, c);
    return Check{e.mean == 0.0 && e.p0 == 1.0, "X == 0"};
  });
  add("simulation_ci_covers_exact_mean", [] {
    const auto q = poisson_instance(10, 0.5, 1.0);
    const double mu = mean_exact(q, inside_roots(q));
    const auto e = simulate(q, SimConfig::for_instance(q, 1'000'000, 20, 2024));
    return Check{std::fabs(e.mean - mu) <= e.ci_halfwidth_mean, fmt("|sim - exact|", std::fabs(e.mean - mu))};
  });

  std::vector<PropertyResult> out;
  out.reserve(checks.size());
  for (auto& [name, f] : checks) {
    PropertyResult r;
    r.name = name;
    try {
      const Check c = f();
      r.passed = c.ok;
      r.detail = c.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bulkq
