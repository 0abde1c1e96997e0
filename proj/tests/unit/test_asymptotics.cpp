#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bulkq/asymptotics.hpp"
#include "bulkq/error.hpp"
#include "bulkq/exact_engine.hpp"
#include "bulkq/special_functions.hpp"
#include "helpers.hpp"

using namespace bulkq;
using testing::poisson_instance;

namespace {

Regime poisson_regime(int s, double alpha, double gamma) { return Regime::create(s, alpha, gamma, 1.0, 1.0); }

double exact_mean(int s, double alpha, double gamma) {
  const auto q = poisson_instance(s, alpha, gamma);
  return mean_exact(q, inside_roots(q));
}

double exact_p0(int s, double alpha, double gamma) {
  const auto q = poisson_instance(s, alpha, gamma);
  return pgf_product(q, inside_roots(q), 0.0).real();
}

std::vector<std::vector<double>> read_golden(const std::string& name) {
  std::ifstream in(std::string(BULKQ_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

// printed to 3 decimals; allow one unit in the last place
bool matches_printed(double value, double printed) { return std::fabs(value - printed) <= 1e-3 + 1e-9; }

}  // namespace

TEST_CASE("saddle point for poisson demand") {
  for (int s : {10, 100, 1000}) {
    const auto q = poisson_instance(s, 0.5, 1.0);
    const auto sp = saddle_point(q, poisson_regime(s, 0.5, 1.0));
    CHECK(sp.residual <= 1e-12);
    CHECK(sp.z_sp * q.theta() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sp.z_sp > 1.0);
    CHECK(sp.z_sp < find_r0(q));
    CHECK(sp.g_at < 0.0);
    CHECK(sp.B > 0.0);
    CHECK(sp.B < 1.0);
    CHECK(sp.c2 == doctest::Approx(-sp.g3_at / (6 * sp.g2_at)));
  }
}

TEST_CASE("saddle point approaches 1 at the predicted rate") {
  const auto x = DemandPgf::geometric(0.4);
  for (double alpha : {0.5, 0.75}) {
    std::vector<double> ratio_shift, ratio_g;
    for (int s : {100, 1000, 10000}) {
      const auto r = Regime::create(s, alpha, 0.5, x);
      const auto q = make_instance(x, r).instance;
      const auto sp = saddle_point(q, r);
      const double a2 = x.variance() / x.mean();
      ratio_shift.push_back((sp.z_sp - 1) / (0.5 / (a2 * std::pow(s, alpha))));
      ratio_g.push_back(sp.g_at / (-0.25 / (2 * a2 * std::pow(s, 2 * alpha))));
    }
    for (std::size_t i = 1; i < 3; ++i) {
      CHECK(std::fabs(ratio_shift[i] - 1) < std::fabs(ratio_shift[i - 1] - 1));
      CHECK(std::fabs(ratio_g[i] - 1) < std::fabs(ratio_g[i - 1] - 1));
    }
    CHECK(ratio_shift[2] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(ratio_g[2] == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("standard saddle at fixed load") {
  const auto q = poisson_instance(200, 0.0, 0.3);
  const auto sp = saddle_point(q, poisson_regime(200, 0.0, 0.3));
  const auto st = mu_standard_saddle(q, sp);
  CHECK_FALSE(st.near_critical);
  CHECK(st.value / exact_mean(200, 0.0, 0.3) == doctest::Approx(1.0).epsilon(0.2));
  std::vector<double> logs;
  for (int s : {50, 100, 200, 400}) {
    const auto qi = poisson_instance(s, 0.0, 0.3);
    logs.push_back(std::log(mu_standard_saddle(qi, saddle_point(qi, poisson_regime(s, 0.0, 0.3))).value));
  }
  for (std::size_t i = 1; i < logs.size(); ++i) CHECK(logs[i] < logs[i - 1]);
  const auto qc = poisson_instance(100, 0.5, 0.1);
  CHECK(mu_standard_saddle(qc, saddle_point(qc, poisson_regime(100, 0.5, 0.1))).near_critical);
}

TEST_CASE("leading and corrected means reproduce printed tables") {
  const auto t1 = read_golden("table1.csv");
  const auto t2 = read_golden("table2.csv");
  for (const auto& [rows, gamma] : {std::pair{t1, 1.0}, std::pair{t2, 0.1}}) {
    for (const auto& row : rows) {
      const int s = static_cast<int>(row[0]);
      const auto r = poisson_regime(s, 0.5, gamma);
      INFO("s = " << s << " gamma = " << gamma);
      CHECK(matches_printed(r.rho(), row[1]));
      CHECK(matches_printed(exact_mean(s, 0.5, gamma), row[2]));
      CHECK(matches_printed(mu_leading(r), row[3]));
      CHECK(matches_printed(mu_corrected_poisson(r), row[4]));
      CHECK(matches_printed(mu_corrected_half(poisson_instance(s, 0.5, gamma), r), row[4]));
    }
  }
  const auto t3 = read_golden("table3.csv");
  for (const auto& row : t3) {
    const int s = static_cast<int>(row[0]);
    const double alphas[] = {0.6, 0.75, 0.9};
    for (int k = 0; k < 3; ++k) {
      INFO("s = " << s << " alpha = " << alphas[k]);
      CHECK(matches_printed(exact_mean(s, alphas[k], 0.1), row[1 + 2 * k]));
      CHECK(matches_printed(mu_leading(poisson_regime(s, alphas[k], 0.1)), row[2 + 2 * k]));
    }
  }
}

TEST_CASE("general correction reduces to the poisson closed form") {
  for (double gamma : {0.1, 0.5, 1.0, 2.0}) {
    for (int s : {10, 100, 1000}) {
      const auto r = poisson_regime(s, 0.5, gamma);
      if (r.b0() >= special::kSqrtTwoPi) continue;
      CHECK(std::fabs(mu_corrected_half(poisson_instance(s, 0.5, gamma), r) - mu_corrected_poisson(r)) <= 1e-10);
    }
  }
  const auto c = correction_constants(1.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(std::isfinite(c.c1 + c.c2 + c.c3 + c.c4));
}

TEST_CASE("corrected mean beats the leading term for non-poisson demand") {
  for (const auto& x : {DemandPgf::geometric(0.5), DemandPgf::binomial(4, 0.25)}) {
    const auto r = Regime::create(200, 0.5, 0.5, x);
    const auto inst = make_instance(x, r);
    const auto rr = Regime::create(200, 0.5, inst.gamma_used, x);
    const double exact = mean_exact(inst.instance, inside_roots(inst.instance));
    const double lead = std::fabs(mu_leading(rr) - exact);
    const double corr = std::fabs(mu_corrected_half(inst.instance, rr) - exact);
    CHECK(corr * 5 < lead);
  }
}

TEST_CASE("error order of the leading term") {
  std::vector<double> e;
  for (int s : {25, 100, 400}) e.push_back(std::fabs(mu_leading(poisson_regime(s, 0.5, 1.0)) / exact_mean(s, 0.5, 1.0) - 1));
  for (std::size_t i = 1; i < e.size(); ++i) {
    CHECK(e[i] / e[i - 1] >= 0.3);
    CHECK(e[i] / e[i - 1] <= 0.7);
  }
}

TEST_CASE("corrected error is bounded and much smaller than the leading error") {
  for (double gamma : {1.0, 0.1}) {
    double worst = 0;
    for (int s : {10, 100, 1000}) {
      const auto r = poisson_regime(s, 0.5, gamma);
      worst = std::max(worst, std::fabs(mu_corrected_poisson(r) - exact_mean(s, 0.5, gamma)));
    }
    CHECK(worst < 0.05);
    const auto r = poisson_regime(1000, 0.5, gamma);
    const double ex = exact_mean(1000, 0.5, gamma);
    CHECK(10 * std::fabs(mu_corrected_poisson(r) - ex) <= std::fabs(mu_leading(r) - ex));
  }
}

TEST_CASE("leading mean scales like sqrt(s) at alpha = 1/2") {
  const double base = mu_leading(poisson_regime(10, 0.5, 1.0)) / std::sqrt(10.0);
  for (int s : {37, 100, 5000, 100000}) {
    CHECK(std::fabs(mu_leading(poisson_regime(s, 0.5, 1.0)) / std::sqrt(double(s)) / base - 1) <= 1e-12);
  }
}

TEST_CASE("simple and three-term means") {
  const auto r = poisson_regime(1000, 0.9, 0.1);
  CHECK(mu_simple(r) == doctest::Approx(std::pow(1000.0, 0.9) * 5).epsilon(1e-14));
  CHECK(std::fabs(mu_three_term(r) - 2487.562) <= 0.3);
  CHECK(mu_simple(poisson_regime(1000, 0.9, 0.2)) == doctest::Approx(mu_simple(r) / 2).epsilon(1e-14));
  CHECK_THROWS_AS(mu_simple(poisson_regime(100, 0.3, 1.0)), Error);
  CHECK_THROWS_AS(mu_leading(poisson_regime(100, 0.3, 1.0)), Error);
}

TEST_CASE("moderate heavy traffic bound") {
  const auto r = poisson_regime(100, 0.3, 1.0);
  const auto b = mu_moderate_bound(r);
  CHECK(b.b0 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(b.exponent == doctest::Approx(0.5 * std::pow(100.0, 0.4)).epsilon(1e-14));
  CHECK_FALSE(b.statement.empty());
  CHECK(mu_moderate_bound(poisson_regime(100, 0.4999999, 1.0)).exponent == doctest::Approx(0.5).epsilon(1e-5));
  std::vector<double> m;
  for (int s : {10, 100, 1000}) m.push_back(exact_mean(s, 0.3, 1.0));
  CHECK(m[1] < m[0]);
  CHECK(m[2] < m[1]);
  const double bb = 0.9 * std::sqrt(0.5);
  const double slope = (std::log(m[2]) - std::log(m[1])) / (std::pow(1000.0, 0.4) - std::pow(100.0, 0.4));
  CHECK(slope <= -bb * bb);
}

TEST_CASE("variance head term and trend") {
  const auto r = poisson_regime(1000, 0.75, 0.1);
  const auto v = var_leading(r);
  REQUIRE(v.head);
  CHECK(*v.head == doctest::Approx(std::pow(1000.0, 1.5) * 25).epsilon(1e-14));
  CHECK(*var_leading(poisson_regime(1000, 0.75, 0.2)).head == doctest::Approx(*v.head / 4).epsilon(1e-14));
  CHECK_FALSE(v.bracket);
  std::vector<double> err;
  for (int s : {10, 100, 1000}) {
    const auto q = poisson_instance(s, 0.75, 0.1);
    err.push_back(std::fabs(var_leading(poisson_regime(s, 0.75, 0.1)).value / contour_moments(q).variance - 1));
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
}

TEST_CASE("variance bracket at alpha = 1/2 matches the G3 form") {
  for (int s : {10, 100, 1000}) {
    const auto v = var_leading(poisson_regime(s, 0.5, 1.0));
    REQUIRE(v.bracket);
    CHECK_FALSE(v.head);
    CHECK(std::fabs(*v.bracket / v.value - 1) <= 1e-8);
  }
  CHECK_THROWS_AS(var_leading(poisson_regime(100, 1.0, 0.1)), Error);
}

TEST_CASE("empty-system probability at alpha = 1/2") {
  std::vector<double> gap;
  for (int s : {100, 1000, 10000}) {
    const auto e = p0_leading(poisson_regime(s, 0.5, 1.0));
    REQUIRE(e.series);
    CHECK(std::fabs(*e.series - e.ln_p0) <= 1e-12);
    gap.push_back(std::fabs(std::exp(e.ln_p0) / exact_p0(s, 0.5, 1.0) - 1));
  }
  CHECK(gap[1] <= 0.05);
  CHECK(gap[1] / gap[0] == doctest::Approx(1 / std::sqrt(10.0)).epsilon(0.3));
  CHECK(gap[2] / gap[1] == doctest::Approx(1 / std::sqrt(10.0)).epsilon(0.3));
}

TEST_CASE("empty-system probability trends") {
  std::vector<double> p03;
  for (int s : {10, 100, 1000}) p03.push_back(exact_p0(s, 0.3, 1.0));
  CHECK(p03[1] > p03[0]);
  CHECK(p03[2] > p03[1]);
  CHECK(p03[2] > 0.99);
  std::vector<double> ls, lp;
  for (int s : {100, 1000, 10000}) {
    const auto e = p0_leading(poisson_regime(s, 0.75, 1.0));
    REQUIRE(e.log_form);
    ls.push_back(std::log(double(s)));
    lp.push_back(e.ln_p0);
  }
  const double slope = (lp[2] - lp[0]) / (ls[2] - ls[0]);
  CHECK(slope == doctest::Approx(-0.25).epsilon(0.2));
}

TEST_CASE("gaussian walk consistency") {
  const auto g = grw_consistency(poisson_regime(10000, 0.5, 1.0));
  CHECK(g.gap <= 0.02);
  CHECK(std::fabs(g.walk / g.leading - 1) == doctest::Approx(g.gap));
  const auto g2 = grw_consistency(poisson_regime(40000, 0.5, 1.0));
  CHECK(g2.gap < g.gap);
  // sigma sqrt(s/(2 mu)) / (2 b0) == sigma sqrt(n) / (2 beta)
  const auto r = poisson_regime(400, 0.5, 0.7);
  const double lhs = std::sqrt(400 / 2.0) / (2 * r.b0());
  const double rhs = std::sqrt(r.n_effective()) / (2 * grw_consistency(r).beta);
  CHECK(std::fabs(lhs - rhs) <= 1e-12 * lhs);
  CHECK_THROWS_AS(grw_consistency(poisson_regime(400, 0.5, 6.0)), Error);
}

TEST_CASE("small beta: both sides grow like 1/(2 beta)") {
  for (double gamma : {0.05, 0.02, 0.01}) {
    const auto g = grw_consistency(poisson_regime(1000000, 0.5, gamma));
    CHECK(g.walk * 2 * g.beta / std::sqrt(1000000 * (1 - gamma / 1000.0)) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(g.gap < 0.01);
  }
}

TEST_CASE("summary fills fields by regime") {
  const auto half = summarize(poisson_instance(100, 0.5, 1.0), poisson_regime(100, 0.5, 1.0));
  CHECK(half.mu_leading);
  CHECK(half.mu_corrected);
  CHECK(half.var_leading);
  CHECK(half.ln_p0);
  const auto ext = summarize(poisson_instance(100, 1.2, 0.1), poisson_regime(100, 1.2, 0.1));
  CHECK(ext.mu_leading);
  CHECK_FALSE(ext.mu_corrected);
  CHECK_FALSE(ext.var_leading);
  const auto mod = summarize(poisson_instance(100, 0.3, 1.0), poisson_regime(100, 0.3, 1.0));
  CHECK_FALSE(mod.mu_leading);
  CHECK_FALSE(mod.declared_error.empty());
}
