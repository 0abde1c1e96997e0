#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "bulkq/bulkq.h"

namespace {

bq_instance* table_instance(int s, double alpha, double gamma) {
  bq_demand* d = nullptr;
  REQUIRE(bq_demand_poisson(1.0, &d) == BQ_OK);
  const bq_regime r{s, alpha, gamma, 1.0, 1.0};
  bq_instance* q = nullptr;
  REQUIRE(bq_instance_from_regime(d, &r, &q, nullptr, nullptr, nullptr) == BQ_OK);
  bq_demand_free(d);
  return q;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(bq_version()) == "1.0.0");
  CHECK(std::string(bq_status_name(BQ_OK)) != "");
  CHECK(std::string(bq_status_name(BQ_ERR_DOMAIN)) != std::string(bq_status_name(BQ_ERR_PARSE)));
}

TEST_CASE("errors map to status codes") {
  double x = 0;
  CHECK(bq_zeta(1.0, &x) == BQ_ERR_DOMAIN);
  CHECK(std::strlen(bq_last_error()) > 0);
  CHECK(bq_zeta(0.5, nullptr) == BQ_ERR_NULL_POINTER);
  bq_demand* d = nullptr;
  CHECK(bq_demand_geometric(1.5, &d) != BQ_OK);
  CHECK(d == nullptr);
  const double bad[] = {0.5, 0.4};
  CHECK(bq_demand_pmf(bad, 2, &d) != BQ_OK);
  const bq_regime r{10, 0.5, 5.0, 1.0, 1.0};
  bq_regime_info info;
  CHECK(bq_regime_check(&r, &info) != BQ_OK);
  bq_config cfg;
  CHECK(bq_config_parse("s = abc\n", &cfg) == BQ_ERR_PARSE);
  CHECK(bq_erlang_c_mean_queue(3, 1.2, &x) != BQ_OK);
}

TEST_CASE("special functions through the C API") {
  double x = 0;
  REQUIRE(bq_zeta(-0.5, &x) == BQ_OK);
  CHECK(x == doctest::Approx(-0.2078862249773545660).epsilon(1e-14));
  bq_series_result g;
  REQUIRE(bq_g_family(0, 1.0, &g) == BQ_OK);
  CHECK(g.value == doctest::Approx(0.09634671352497556927885).epsilon(1e-12));
  CHECK(g.in_domain == 1);
  CHECK(bq_g_family(9, 1.0, &g) != BQ_OK);
  REQUIRE(bq_em_beta(1.0, &x) == BQ_OK);
  CHECK(x == doctest::Approx(0.1263726346869129881436).epsilon(1e-12));
}

TEST_CASE("demand handles") {
  bq_demand* d = nullptr;
  REQUIRE(bq_demand_binomial(4, 0.25, &d) == BQ_OK);
  bq_demand* c = nullptr;
  REQUIRE(bq_demand_clone(d, &c) == BQ_OK);
  bq_demand_free(d);
  double m = 0, v = 0;
  REQUIRE(bq_demand_moments(c, &m, &v) == BQ_OK);
  CHECK(m == doctest::Approx(1.0));
  CHECK(v == doctest::Approx(0.75));
  bq_demand_kind k;
  REQUIRE(bq_demand_kind_get(c, &k) == BQ_OK);
  CHECK(k == BQ_DEMAND_BINOMIAL);
  double re = 0, im = 0;
  REQUIRE(bq_demand_eval(c, 1.0, 0.0, 1, &re, &im) == BQ_OK);
  CHECK(re == doctest::Approx(1.0));
  bq_demand_free(c);
  bq_demand_free(nullptr);
}

TEST_CASE("config parse returns an owned demand") {
  bq_config cfg;
  REQUIRE(bq_config_parse("kind = geometric\np = 0.5\ns = 12\nalpha = 0.75\n", &cfg) == BQ_OK);
  REQUIRE(cfg.demand != nullptr);
  CHECK(cfg.has_s == 1);
  CHECK(cfg.s == 12);
  CHECK(cfg.has_alpha == 1);
  CHECK(cfg.has_gamma == 0);
  bq_demand_free(cfg.demand);
}

TEST_CASE("exact pipeline through the C API") {
  bq_instance* q = table_instance(10, 0.5, 1.0);
  bq_instance_info info;
  REQUIRE(bq_instance_info_get(q, &info) == BQ_OK);
  CHECK(info.s == 10);
  CHECK(info.mu_a == doctest::Approx(6.8377).epsilon(1e-4));
  bq_roots* r = nullptr;
  REQUIRE(bq_roots_compute(q, 2, &r) == BQ_OK);
  bq_roots_info ri;
  REQUIRE(bq_roots_info_get(r, &ri) == BQ_OK);
  CHECK(ri.count == 9);
  std::vector<double> re(ri.count), im(ri.count);
  REQUIRE(bq_roots_get(r, re.data(), im.data(), ri.count) == BQ_OK);
  for (std::size_t i = 0; i < ri.count; ++i) CHECK(std::hypot(re[i], im[i]) < 1.0);
  double mean = 0;
  REQUIRE(bq_mean_exact(q, r, &mean) == BQ_OK);
  CHECK(mean == doctest::Approx(0.244820).epsilon(1e-5));
  bq_exact_summary sum;
  REQUIRE(bq_exact_summary_compute(q, r, 0.0, &sum) == BQ_OK);
  CHECK(sum.method == BQ_METHOD_BOTH);
  CHECK(sum.cross_check_gap <= 1e-8);
  CHECK(sum.radius == doctest::Approx(std::sqrt(ri.r0)));
  const double w_re[] = {0.0, 0.3, 0.9}, w_im[] = {0.0, 0.0, 0.0};
  double gap = 1;
  REQUIRE(bq_identity_check(q, r, w_re, w_im, 3, 0.0, &gap) == BQ_OK);
  CHECK(gap <= 1e-8);
  std::vector<double> dist(31);
  REQUIRE(bq_distribution(q, r, 30, dist.data()) == BQ_OK);
  CHECK(dist[0] == doctest::Approx(sum.p0).epsilon(1e-9));
  bq_roots_free(r);
  bq_instance_free(q);
}

TEST_CASE("asymptotics through the C API") {
  const bq_regime r{10, 0.5, 1.0, 1.0, 1.0};
  double v = 0;
  REQUIRE(bq_mu_leading(&r, &v) == BQ_OK);
  CHECK(std::fabs(v - 0.399) <= 1e-3);
  REQUIRE(bq_mu_corrected_poisson(&r, &v) == BQ_OK);
  CHECK(std::fabs(v - 0.247) <= 1e-3);
  const bq_regime bad{100, 0.3, 1.0, 1.0, 1.0};
  CHECK(bq_mu_leading(&bad, &v) == BQ_ERR_DOMAIN);
  double b0 = 0, ex = 0;
  REQUIRE(bq_mu_moderate_bound(&bad, &b0, &ex) == BQ_OK);
  CHECK(b0 == doctest::Approx(std::sqrt(0.5)));
  bq_grw g;
  const bq_regime big{10000, 0.5, 1.0, 1.0, 1.0};
  REQUIRE(bq_grw_consistency(&big, &g) == BQ_OK);
  CHECK(g.gap <= 0.02);
}

TEST_CASE("simulation through the C API") {
  bq_instance* q = table_instance(10, 0.5, 1.0);
  bq_sim_config c;
  REQUIRE(bq_sim_default_config(q, 200000, 20, 4, &c) == BQ_OK);
  bq_sim_estimate e[3];
  REQUIRE(bq_simulate_replications(q, &c, 3, 0, e) == BQ_OK);
  CHECK(e[0].mean != e[1].mean);
  bq_sim_estimate one;
  c.batches = 3;
  CHECK(bq_simulate(q, &c, &one) != BQ_OK);
  bq_instance_free(q);
}

TEST_CASE("validation suite through the C API") {
  int passed = 0, failed = 0;
  std::vector<std::string> names;
  auto cb = [](const char* name, int, const char*, void* user) {
    static_cast<std::vector<std::string>*>(user)->push_back(name);
  };
  REQUIRE(bq_validate(cb, &names, &passed, &failed) == BQ_OK);
  CHECK(failed == 0);
  CHECK(passed >= 25);
  CHECK(names.size() == static_cast<std::size_t>(passed + failed));
}
