#include <doctest.h>

#include <cmath>

#include "bulkq/error.hpp"
#include "bulkq/exact_engine.hpp"
#include "bulkq/simulator.hpp"
#include "helpers.hpp"

using namespace bulkq;
using testing::poisson_instance;

TEST_CASE("config checks") {
  const auto q = poisson_instance(10, 0.5, 1.0);
  CHECK(minimum_warmup(q) >= static_cast<std::int64_t>(10 * 10 / (10 - q.mu_a())));
  auto c = SimConfig::for_instance(q, 200000, 20, 3);
  CHECK(c.warmup_periods == minimum_warmup(q));
  c.batches = 19;
  c.measured_periods = 190000;
  CHECK_THROWS_AS(simulate(q, c), Error);
  c.batches = 20;
  c.measured_periods = 200001;
  CHECK_THROWS_AS(simulate(q, c), Error);
  c.measured_periods = 200000;
  c.warmup_periods = 0;
  CHECK_THROWS_AS(simulate(q, c), Error);
}

TEST_CASE("same seed, same estimate") {
  const auto q = poisson_instance(20, 0.5, 1.0);
  const auto c = SimConfig::for_instance(q, 400000, 20, 42);
  const auto a = simulate(q, c), b = simulate(q, c);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(a.p0 == b.p0);
  CHECK(a.ci_halfwidth_mean == b.ci_halfwidth_mean);
  CHECK(a.periods_simulated == c.warmup_periods + c.measured_periods);
}

TEST_CASE("two seeds agree within their CIs") {
  const auto q = poisson_instance(10, 0.5, 1.0);
  const auto a = simulate(q, SimConfig::for_instance(q, 1000000, 20, 1));
  const auto b = simulate(q, SimConfig::for_instance(q, 1000000, 20, 2));
  CHECK(a.mean != b.mean);
  CHECK(std::fabs(a.mean - b.mean) < a.ci_halfwidth_mean + b.ci_halfwidth_mean);
  CHECK(a.ci_halfwidth_mean > 0);
  CHECK(a.p0 >= 0);
  CHECK(a.p0 <= 1);
}

TEST_CASE("estimates agree with the exact engine") {
  const auto q = poisson_instance(10, 0.5, 1.0);
  const auto rs = inside_roots(q);
  const auto ex = exact_summary(q, rs);
  const auto e = simulate(q, SimConfig::for_instance(q, 2000000, 20, 7));
  CHECK(std::fabs(e.mean - ex.mean) <= 3 * e.ci_halfwidth_mean);
  CHECK(std::fabs(e.variance - ex.variance) <= 3 * e.ci_halfwidth_variance);
  CHECK(std::fabs(e.p0 - ex.p0) <= 3 * e.ci_halfwidth_p0);
}

TEST_CASE("non-poisson samplers agree with the exact engine") {
  const QueueInstance qb(DemandPgf::binomial(4, 0.3), 6, 4);
  const QueueInstance qg(DemandPgf::geometric(0.5), 8, 6);
  const QueueInstance qp(DemandPgf::explicit_pmf({0.2, 0.3, 0.1, 0.4}), 9, 5);
  for (const auto* q : {&qb, &qg, &qp}) {
    const auto ex = exact_summary(*q, inside_roots(*q));
    const auto e = simulate(*q, SimConfig::for_instance(*q, 1000000, 20, 11));
    INFO("s = " << q->s());
    CHECK(std::fabs(e.mean - ex.mean) <= 3 * e.ci_halfwidth_mean);
    CHECK(std::fabs(e.p0 - ex.p0) <= 3 * e.ci_halfwidth_p0);
  }
}

TEST_CASE("doubling the run length shrinks the CI by about 1/sqrt 2") {
  const auto q = poisson_instance(10, 0.5, 1.0);
  // average over a few seeds; a single pair of batch-means CIs is too noisy
  double short_sum = 0, long_sum = 0;
  for (int i = 0; i < 8; ++i) {
    short_sum += simulate(q, SimConfig::for_instance(q, 400000, 40, replication_seed(5, i))).ci_halfwidth_mean;
    long_sum += simulate(q, SimConfig::for_instance(q, 800000, 40, replication_seed(6, i))).ci_halfwidth_mean;
  }
  const double ratio = long_sum / short_sum;
  CHECK(ratio >= 0.6);
  CHECK(ratio <= 0.8);
}

TEST_CASE("replications are independent and reproducible") {
  const auto q = poisson_instance(10, 0.5, 1.0);
  const auto c = SimConfig::for_instance(q, 100000, 20, 9);
  const auto a = simulate_replications(q, c, 6, 3);
  const auto b = simulate_replications(q, c, 6, 1);
  REQUIRE(a.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(a[i].mean == b[i].mean);
    auto ci = c;
    ci.seed = replication_seed(9, i);
    CHECK(simulate(q, ci).mean == a[i].mean);
  }
  CHECK(a[0].mean != a[1].mean);
  CHECK(replication_seed(9, 0) != replication_seed(9, 1));
}

TEST_CASE("no demand: empty system") {
  const QueueInstance q(DemandPgf::explicit_pmf({1.0}), 3, 2);
  const auto e = simulate(q, SimConfig::for_instance(q, 1000, 20, 1));
  CHECK(e.mean == 0.0);
  CHECK(e.p0 == 1.0);
}
