#include <doctest.h>

#include <cmath>
#include <vector>

#include "bulkq/error.hpp"
#include "bulkq/reference_queues.hpp"

using namespace bulkq;

namespace {

// Truncated birth-death chain with birth rate a and death rate min(k, s).
double birth_death_lq(int s, double rho, int states = 20000) {
  const double a = rho * s;
  std::vector<double> p(states, 0.0);
  p[0] = 1.0;
  double total = 1.0;
  for (int k = 1; k < states; ++k) {
    p[k] = p[k - 1] * a / std::min(k, s);
    total += p[k];
    if (p[k] < 1e-300) break;
  }
  double lq = 0;
  for (int k = s + 1; k < states; ++k) lq += (k - s) * p[k];
  return lq / total;
}

}  // namespace

TEST_CASE("erlang C small cases") {
  CHECK(erlang_c(2, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(erlang_c_mean_queue(2, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  for (double rho : {0.1, 0.5, 0.9, 0.99}) CHECK(erlang_c_mean_queue(1, rho) == doctest::Approx(rho * rho / (1 - rho)).epsilon(1e-14));
  CHECK(erlang_c_mean_queue(10, 1e-6) < 1e-40);
  CHECK_THROWS_AS(erlang_c_mean_queue(5, 1.0), Error);
  CHECK_THROWS_AS(erlang_c_mean_queue(5, 0.0), Error);
  CHECK_THROWS_AS(erlang_c_mean_queue(0, 0.5), Error);
}

TEST_CASE("erlang C against the birth-death chain") {
  for (int s : {1, 2, 7, 30, 100}) {
    for (double rho : {0.3, 0.8, 0.95}) {
      INFO("s = " << s << " rho = " << rho);
      CHECK(erlang_c_mean_queue(s, rho) == doctest::Approx(birth_death_lq(s, rho)).epsilon(1e-11));
    }
  }
}

TEST_CASE("recurrence matches direct summation for s <= 170") {
  for (int s = 1; s <= 170; s += 13) {
    for (double rho : {0.2, 0.7, 0.97}) {
      const double a = erlang_c_mean_queue(s, rho), b = erlang_c_mean_queue_direct(s, rho);
      CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, a));
    }
  }
  CHECK_THROWS_AS(erlang_c_mean_queue_direct(171, 0.5), Error);
}

TEST_CASE("Lq increasing in rho and finite at large s") {
  for (int s : {5, 500, 100000}) {
    double prev = 0;
    for (double rho = 0.05; rho < 1; rho += 0.05) {
      const double v = erlang_c_mean_queue(s, rho);
      CHECK(v >= prev);
      CHECK(std::isfinite(v));
      prev = v;
    }
  }
}

TEST_CASE("slope of Lq against s") {
  const std::vector<int> grid{10, 32, 100, 316, 1000, 3162, 10000};
  for (double alpha : {0.5, 0.75, 0.9}) CHECK(std::fabs(slope_fit(alpha, 0.1, grid) - alpha) <= 0.05);
  CHECK(slope_fit(0.3, 0.1, grid) < 0.3);
  CHECK_THROWS_AS(slope_fit(0.5, 0.1, {10, 100}), Error);
  CHECK_THROWS_AS(slope_fit(0.5, 5.0, {10, 100, 1000}), Error);
}

TEST_CASE("Lq s^-alpha settles") {
  const std::vector<int> grid{10, 100, 1000, 10000, 100000};
  for (double alpha : {0.5, 0.75}) {
    const auto c = mms_curve(alpha, 0.1, grid);
    REQUIRE(c.size() == grid.size());
    const double a = c[3].mean_queue / std::pow(c[3].s, alpha);
    const double b = c[4].mean_queue / std::pow(c[4].s, alpha);
    CHECK(a > 0);
    CHECK(std::fabs(b / a - 1) <= 0.15);
    for (const auto& p : c) CHECK(p.rho == doctest::Approx(1 - 0.1 / std::pow(p.s, alpha)));
  }
}

TEST_CASE("least squares slope") {
  CHECK(least_squares_slope({1, 2, 3, 4}, {3, 5, 7, 9}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(least_squares_slope({1, 1, 1}, {1, 2, 3}), Error);
}
