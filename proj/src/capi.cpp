#include "bulkq/bulkq.h"

#include <new>
#include <string>

#include "bulkq/asymptotics.hpp"
#include "bulkq/error.hpp"
#include "bulkq/exact_engine.hpp"
#include "bulkq/reference_queues.hpp"
#include "bulkq/simulator.hpp"
#include "bulkq/special_functions.hpp"
#include "bulkq/validation.hpp"

struct bq_demand {
  bulkq::DemandPgf pgf;
};

struct bq_instance {
  bulkq::QueueInstance q;
};

struct bq_roots {
  bulkq::RootSet set;
};

namespace {

thread_local std::string g_last_error;

bq_status record(bq_status st, const char* msg) {
  g_last_error = msg;
  return st;
}

template <class F>
bq_status guard(F&& f) {
  try {
    f();
    return BQ_OK;
  } catch (const bulkq::Error& e) {
    return record(static_cast<bq_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(BQ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(BQ_ERR_INTERNAL, e.what());
  }
}

#define BQ_NONNULL(p)                                                       \
  do {                                                                      \
    if (!(p)) return record(BQ_ERR_NULL_POINTER, "null pointer: " #p);      \
  } while (0)

bulkq::Regime to_regime(const bq_regime* r) {
  return bulkq::Regime::create(r->s, r->alpha, r->gamma, r->mu_x, r->sigma2_x);
}

void copy_series(const bulkq::special::SeriesResult& s, bq_series_result* out) {
  out->value = s.value;
  out->series = s.series;
  out->quadrature = s.quadrature;
  out->terms_used = s.terms_used;
  out->truncation_bound = s.truncation_bound;
  out->in_domain = s.in_domain ? 1 : 0;
}

void copy_summary(const bulkq::ExactSummary& s, bq_exact_summary* out) {
  out->mean = s.mean;
  out->variance = s.variance;
  out->p0 = s.p0;
  out->method = static_cast<bq_method>(static_cast<int>(s.method));
  out->cross_check_gap = s.cross_check_gap;
  out->radius = s.radius;
  out->nodes = s.nodes;
}

void copy_estimate(const bulkq::SimEstimate& e, bq_sim_estimate* out) {
  out->mean = e.mean;
  out->variance = e.variance;
  out->p0 = e.p0;
  out->ci_halfwidth_mean = e.ci_halfwidth_mean;
  out->ci_halfwidth_variance = e.ci_halfwidth_variance;
  out->ci_halfwidth_p0 = e.ci_halfwidth_p0;
  out->periods_simulated = e.periods_simulated;
}

bulkq::SimConfig to_sim_config(const bq_sim_config* c) {
  bulkq::SimConfig out;
  out.warmup_periods = c->warmup_periods;
  out.measured_periods = c->measured_periods;
  out.batches = c->batches;
  out.seed = c->seed;
  return out;
}

std::optional<double> radius_opt(double r) { return r > 0.0 ? std::optional<double>(r) : std::nullopt; }

}  // namespace

extern "C" {

const char* bq_version(void) { return "1.0.0"; }

const char* bq_last_error(void) { return g_last_error.c_str(); }

const char* bq_status_name(bq_status status) {
  switch (status) {
    case BQ_OK: return "ok";
    case BQ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BQ_ERR_DOMAIN: return "domain error";
    case BQ_ERR_UNSTABLE: return "unstable";
    case BQ_ERR_NO_CONVERGENCE: return "no convergence";
    case BQ_ERR_ILL_CONDITIONED: return "ill-conditioned";
    case BQ_ERR_PARSE: return "parse error";
    case BQ_ERR_UNSUPPORTED: return "unsupported";
    case BQ_ERR_NULL_POINTER: return "null pointer";
    case BQ_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

bq_status bq_zeta(double x, double* out) {
  BQ_NONNULL(out);
  return guard([&] {
    bulkq::require(x != 1.0, bulkq::ErrorCode::Domain, "zeta: pole at x = 1");
    *out = bulkq::special::zeta(x);
  });
}

bq_status bq_erfc(double x, double* out) {
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::special::erfc(x); });
}

bq_status bq_lerch_phi(double z, double s_param, double v, double* out) {
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::special::lerch_phi(z, s_param, v); });
}

bq_status bq_g_family(int k, double b, bq_series_result* out) {
  BQ_NONNULL(out);
  return guard([&] { copy_series(bulkq::special::g_family(k, b), out); });
}

bq_status bq_g_quadrature(int k, double b, double t_max, double* out) {
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::special::g_quadrature(k, b, t_max); });
}

bq_status bq_f_of_beta(double beta, bq_series_result* out) {
  BQ_NONNULL(out);
  return guard([&] { copy_series(bulkq::special::f_of_beta(beta), out); });
}

bq_status bq_em_beta(double beta, double* out) {
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::special::em_beta(beta); });
}

bq_status bq_demand_poisson(double rate, bq_demand** out) {
  BQ_NONNULL(out);
  return guard([&] { *out = new bq_demand{bulkq::DemandPgf::poisson(rate)}; });
}

bq_status bq_demand_geometric(double success_prob, bq_demand** out) {
  BQ_NONNULL(out);
  return guard([&] { *out = new bq_demand{bulkq::DemandPgf::geometric(success_prob)}; });
}

bq_status bq_demand_binomial(int trials, double prob, bq_demand** out) {
  BQ_NONNULL(out);
  return guard([&] { *out = new bq_demand{bulkq::DemandPgf::binomial(trials, prob)}; });
}

bq_status bq_demand_pmf(const double* pmf, size_t len, bq_demand** out) {
  BQ_NONNULL(out);
  BQ_NONNULL(pmf);
  return guard([&] { *out = new bq_demand{bulkq::DemandPgf::explicit_pmf(std::vector<double>(pmf, pmf + len))}; });
}

bq_status bq_demand_clone(const bq_demand* d, bq_demand** out) {
  BQ_NONNULL(d);
  BQ_NONNULL(out);
  return guard([&] { *out = new bq_demand{d->pgf}; });
}

void bq_demand_free(bq_demand* d) { delete d; }

bq_status bq_demand_kind_get(const bq_demand* d, bq_demand_kind* out) {
  BQ_NONNULL(d);
  BQ_NONNULL(out);
  *out = static_cast<bq_demand_kind>(static_cast<int>(d->pgf.kind()));
  return BQ_OK;
}

bq_status bq_demand_moments(const bq_demand* d, double* mean, double* variance) {
  BQ_NONNULL(d);
  if (mean) *mean = d->pgf.mean();
  if (variance) *variance = d->pgf.variance();
  return BQ_OK;
}

bq_status bq_demand_eval(const bq_demand* d, double re, double im, int order, double* out_re, double* out_im) {
  BQ_NONNULL(d);
  BQ_NONNULL(out_re);
  BQ_NONNULL(out_im);
  return guard([&] {
    const auto v = d->pgf.eval({re, im}, order);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

bq_status bq_config_parse(const char* text, bq_config* out) {
  BQ_NONNULL(text);
  BQ_NONNULL(out);
  return guard([&] {
    const auto cfg = bulkq::parse_model_config(text);
    *out = bq_config{};
    if (cfg.demand) out->demand = new bq_demand{*cfg.demand};
    if (cfg.s) {
      out->has_s = 1;
      out->s = *cfg.s;
    }
    if (cfg.alpha) {
      out->has_alpha = 1;
      out->alpha = *cfg.alpha;
    }
    if (cfg.gamma) {
      out->has_gamma = 1;
      out->gamma = *cfg.gamma;
    }
  });
}

bq_status bq_regime_check(const bq_regime* r, bq_regime_info* out) {
  BQ_NONNULL(r);
  return guard([&] {
    const auto reg = to_regime(r);
    if (out) *out = bq_regime_info{reg.rho(), reg.theta(), reg.n_effective(), reg.b0(), reg.d()};
  });
}

bq_status bq_instance_create(const bq_demand* d, int s, double n, bq_instance** out) {
  BQ_NONNULL(d);
  BQ_NONNULL(out);
  return guard([&] { *out = new bq_instance{bulkq::QueueInstance(d->pgf, s, n)}; });
}

bq_status bq_instance_from_regime(const bq_demand* d, const bq_regime* r, bq_instance** out, double* n_used,
                                  double* gamma_used, int* rounded) {
  BQ_NONNULL(d);
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] {
    auto res = bulkq::make_instance(d->pgf, to_regime(r));
    if (n_used) *n_used = res.n_used;
    if (gamma_used) *gamma_used = res.gamma_used;
    if (rounded) *rounded = res.rounded ? 1 : 0;
    *out = new bq_instance{std::move(res.instance)};
  });
}

void bq_instance_free(bq_instance* q) { delete q; }

bq_status bq_instance_info_get(const bq_instance* q, bq_instance_info* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(out);
  const auto& i = q->q;
  *out = bq_instance_info{i.s(), i.n(), i.mu_a(), i.sigma2_a(), i.rho(), i.has_mass_above_capacity() ? 1 : 0};
  return BQ_OK;
}

bq_status bq_find_r0(const bq_instance* q, double* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::find_r0(q->q); });
}

bq_status bq_roots_compute(const bq_instance* q, unsigned threads, bq_roots** out) {
  BQ_NONNULL(q);
  BQ_NONNULL(out);
  return guard([&] {
    bulkq::RootOptions opts;
    opts.threads = threads;
    *out = new bq_roots{bulkq::inside_roots(q->q, opts)};
  });
}

void bq_roots_free(bq_roots* r) { delete r; }

bq_status bq_roots_info_get(const bq_roots* r, bq_roots_info* out) {
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  const auto& s = r->set;
  *out = bq_roots_info{s.inside_roots.size(), s.r0, s.residual_max, s.condition, s.iterations_max};
  return BQ_OK;
}

bq_status bq_roots_get(const bq_roots* r, double* re, double* im, size_t cap) {
  BQ_NONNULL(r);
  BQ_NONNULL(re);
  BQ_NONNULL(im);
  const auto& z = r->set.inside_roots;
  for (size_t i = 0; i < z.size() && i < cap; ++i) {
    re[i] = z[i].real();
    im[i] = z[i].imag();
  }
  return BQ_OK;
}

bq_status bq_mean_exact(const bq_instance* q, const bq_roots* r, double* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::mean_exact(q->q, r->set); });
}

bq_status bq_pgf_product(const bq_instance* q, const bq_roots* r, double w_re, double w_im, double* out_re,
                         double* out_im) {
  BQ_NONNULL(q);
  BQ_NONNULL(r);
  BQ_NONNULL(out_re);
  BQ_NONNULL(out_im);
  return guard([&] {
    const auto v = bulkq::pgf_product(q->q, r->set, {w_re, w_im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

bq_status bq_pgf_contour(const bq_instance* q, double w_re, double w_im, double radius, double* out_re,
                         double* out_im) {
  BQ_NONNULL(q);
  BQ_NONNULL(out_re);
  BQ_NONNULL(out_im);
  return guard([&] {
    const auto v = bulkq::pgf_contour(q->q, {w_re, w_im}, radius_opt(radius));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

bq_status bq_contour_moments(const bq_instance* q, double radius, bq_exact_summary* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(out);
  return guard([&] { copy_summary(bulkq::contour_moments(q->q, radius_opt(radius)), out); });
}

bq_status bq_exact_summary_compute(const bq_instance* q, const bq_roots* r, double radius, bq_exact_summary* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] { copy_summary(bulkq::exact_summary(q->q, r->set, radius_opt(radius)), out); });
}

bq_status bq_identity_check(const bq_instance* q, const bq_roots* r, const double* w_re, const double* w_im,
                            size_t count, double radius, double* max_gap) {
  BQ_NONNULL(q);
  BQ_NONNULL(r);
  BQ_NONNULL(w_re);
  BQ_NONNULL(w_im);
  BQ_NONNULL(max_gap);
  return guard([&] {
    std::vector<bulkq::cplx> ws;
    for (size_t i = 0; i < count; ++i) ws.emplace_back(w_re[i], w_im[i]);
    *max_gap = bulkq::pollaczek_identity_check(q->q, r->set, ws, radius_opt(radius));
  });
}

bq_status bq_distribution(const bq_instance* q, const bq_roots* r, int j_max, double* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] {
    const auto p = bulkq::distribution(q->q, r->set, j_max);
    std::copy(p.begin(), p.end(), out);
  });
}

bq_status bq_saddle_point(const bq_instance* q, const bq_regime* r, bq_saddle* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] {
    const auto sp = bulkq::saddle_point(q->q, to_regime(r));
    *out = bq_saddle{sp.z_sp, sp.g_at, sp.g2_at, sp.g3_at, sp.B, sp.a1, sp.a2, sp.a3, sp.c2, sp.residual};
  });
}

bq_status bq_mu_standard_saddle(const bq_instance* q, const bq_saddle* sp, double* out, int* near_critical) {
  BQ_NONNULL(q);
  BQ_NONNULL(sp);
  BQ_NONNULL(out);
  return guard([&] {
    bulkq::SaddleInfo info;
    info.z_sp = sp->z_sp;
    info.g_at = sp->g_at;
    info.g2_at = sp->g2_at;
    info.g3_at = sp->g3_at;
    info.B = sp->B;
    const auto v = bulkq::mu_standard_saddle(q->q, info);
    *out = v.value;
    if (near_critical) *near_critical = v.near_critical ? 1 : 0;
  });
}

bq_status bq_mu_leading(const bq_regime* r, double* out) {
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::mu_leading(to_regime(r)); });
}

bq_status bq_mu_simple(const bq_regime* r, double* out) {
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::mu_simple(to_regime(r)); });
}

bq_status bq_mu_three_term(const bq_regime* r, double* out) {
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::mu_three_term(to_regime(r)); });
}

bq_status bq_mu_moderate_bound(const bq_regime* r, double* b0, double* exponent) {
  BQ_NONNULL(r);
  return guard([&] {
    const auto m = bulkq::mu_moderate_bound(to_regime(r));
    if (b0) *b0 = m.b0;
    if (exponent) *exponent = m.exponent;
  });
}

bq_status bq_mu_corrected_half(const bq_instance* q, const bq_regime* r, double* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::mu_corrected_half(q->q, to_regime(r)); });
}

bq_status bq_mu_corrected_poisson(const bq_regime* r, double* out) {
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::mu_corrected_poisson(to_regime(r)); });
}

bq_status bq_var_leading(const bq_regime* r, bq_variance_forms* out) {
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] {
    const auto v = bulkq::var_leading(to_regime(r));
    *out = bq_variance_forms{v.value, v.head ? 1 : 0, v.head.value_or(0.0), v.bracket ? 1 : 0,
                             v.bracket.value_or(0.0)};
  });
}

bq_status bq_p0_leading(const bq_regime* r, bq_empty_forms* out) {
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] {
    const auto p = bulkq::p0_leading(to_regime(r));
    *out = bq_empty_forms{p.ln_p0, p.series ? 1 : 0, p.series.value_or(0.0), p.log_form ? 1 : 0,
                          p.log_form.value_or(0.0)};
  });
}

bq_status bq_grw_consistency(const bq_regime* r, bq_grw* out) {
  BQ_NONNULL(r);
  BQ_NONNULL(out);
  return guard([&] {
    const auto g = bulkq::grw_consistency(to_regime(r));
    *out = bq_grw{g.beta, g.walk, g.leading, g.gap};
  });
}

bq_status bq_sim_default_config(const bq_instance* q, int64_t measured, int batches, uint64_t seed,
                                bq_sim_config* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(out);
  return guard([&] {
    const auto c = bulkq::SimConfig::for_instance(q->q, measured, batches, seed);
    *out = bq_sim_config{c.warmup_periods, c.measured_periods, c.batches, c.seed};
  });
}

bq_status bq_simulate(const bq_instance* q, const bq_sim_config* c, bq_sim_estimate* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(c);
  BQ_NONNULL(out);
  return guard([&] { copy_estimate(bulkq::simulate(q->q, to_sim_config(c)), out); });
}

bq_status bq_simulate_replications(const bq_instance* q, const bq_sim_config* c, int replications, unsigned threads,
                                   bq_sim_estimate* out) {
  BQ_NONNULL(q);
  BQ_NONNULL(c);
  BQ_NONNULL(out);
  return guard([&] {
    const auto est = bulkq::simulate_replications(q->q, to_sim_config(c), replications, threads);
    for (std::size_t i = 0; i < est.size(); ++i) copy_estimate(est[i], out + i);
  });
}

bq_status bq_erlang_c_mean_queue(int s, double rho, double* out) {
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::erlang_c_mean_queue(s, rho); });
}

bq_status bq_erlang_c_mean_queue_direct(int s, double rho, double* out) {
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::erlang_c_mean_queue_direct(s, rho); });
}

bq_status bq_slope_fit(double alpha, double gamma, const int* s_grid, size_t count, double* out) {
  BQ_NONNULL(s_grid);
  BQ_NONNULL(out);
  return guard([&] { *out = bulkq::slope_fit(alpha, gamma, std::vector<int>(s_grid, s_grid + count)); });
}

bq_status bq_validate(bq_property_cb cb, void* user, int* passed, int* failed) {
  return guard([&] {
    int ok = 0, bad = 0;
    for (const auto& r : bulkq::run_validation_suite()) {
      (r.passed ? ok : bad) += 1;
      if (cb) cb(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
    }
    if (passed) *passed = ok;
    if (failed) *failed = bad;
  });
}

}  // extern "C"
