#ifndef BULKQ_BULKQ_H
#define BULKQ_BULKQ_H

/* C interface to libbulkq: exact, asymptotic and simulated stationary
   analysis of the discrete bulk-service queue Q' = max(Q + A - s, 0).

   Every function returns a bq_status. On failure bq_last_error() holds a
   message for the calling thread until its next failing call. Handles are
   opaque and owned by the caller; release them with the matching _free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BQ_API __declspec(dllexport)
#else
#define BQ_API __attribute__((visibility("default")))
#endif

typedef enum bq_status {
  BQ_OK = 0,
  BQ_ERR_INVALID_ARGUMENT = 1,
  BQ_ERR_DOMAIN = 2,
  BQ_ERR_UNSTABLE = 3,
  BQ_ERR_NO_CONVERGENCE = 4,
  BQ_ERR_ILL_CONDITIONED = 5,
  BQ_ERR_PARSE = 6,
  BQ_ERR_UNSUPPORTED = 7,
  BQ_ERR_NULL_POINTER = 8,
  BQ_ERR_INTERNAL = 99
} bq_status;

typedef struct bq_demand bq_demand;
typedef struct bq_instance bq_instance;
typedef struct bq_roots bq_roots;

BQ_API const char* bq_version(void);
BQ_API const char* bq_last_error(void);
BQ_API const char* bq_status_name(bq_status status);

/* ---- special functions ---- */

typedef struct bq_series_result {
  double value;
  double series;
  double quadrature;
  size_t terms_used;
  double truncation_bound;
  int in_domain;
} bq_series_result;

BQ_API bq_status bq_zeta(double x, double* out);
BQ_API bq_status bq_erfc(double x, double* out);
BQ_API bq_status bq_lerch_phi(double z, double s_param, double v, double* out);
/* k in 0..6 */
BQ_API bq_status bq_g_family(int k, double b, bq_series_result* out);
BQ_API bq_status bq_g_quadrature(int k, double b, double t_max, double* out);
BQ_API bq_status bq_f_of_beta(double beta, bq_series_result* out);
BQ_API bq_status bq_em_beta(double beta, double* out);

/* ---- demand pgf ---- */

typedef enum bq_demand_kind {
  BQ_DEMAND_POISSON = 0,
  BQ_DEMAND_GEOMETRIC = 1,
  BQ_DEMAND_BINOMIAL = 2,
  BQ_DEMAND_PMF = 3
} bq_demand_kind;

BQ_API bq_status bq_demand_poisson(double rate, bq_demand** out);
BQ_API bq_status bq_demand_geometric(double success_prob, bq_demand** out);
BQ_API bq_status bq_demand_binomial(int trials, double prob, bq_demand** out);
BQ_API bq_status bq_demand_pmf(const double* pmf, size_t len, bq_demand** out);
BQ_API bq_status bq_demand_clone(const bq_demand* d, bq_demand** out);
BQ_API void bq_demand_free(bq_demand* d);

BQ_API bq_status bq_demand_kind_get(const bq_demand* d, bq_demand_kind* out);
BQ_API bq_status bq_demand_moments(const bq_demand* d, double* mean, double* variance);
/* X^(order)(z), order 0..3 */
BQ_API bq_status bq_demand_eval(const bq_demand* d, double re, double im, int order, double* out_re, double* out_im);

typedef struct bq_config {
  bq_demand* demand; /* NULL when the text names no demand; caller frees */
  int has_s;
  int s;
  int has_alpha;
  double alpha;
  int has_gamma;
  double gamma;
} bq_config;

/* key = value text; see the README for keys. */
BQ_API bq_status bq_config_parse(const char* text, bq_config* out);

/* ---- scaling regime and instances ---- */

typedef struct bq_regime {
  int s;
  double alpha;
  double gamma;
  double mu_x;
  double sigma2_x;
} bq_regime;

typedef struct bq_regime_info {
  double rho;
  double theta;
  double n;
  double b0;
  double d;
} bq_regime_info;

BQ_API bq_status bq_regime_check(const bq_regime* r, bq_regime_info* out);

typedef struct bq_instance_info {
  int s;
  double n;
  double mu_a;
  double sigma2_a;
  double rho;
  int has_mass_above_capacity;
} bq_instance_info;

BQ_API bq_status bq_instance_create(const bq_demand* d, int s, double n, bq_instance** out);
/* Rounds n for non-divisible demand; gamma_used is the gamma matching the rounded n. Outputs may be NULL. */
BQ_API bq_status bq_instance_from_regime(const bq_demand* d, const bq_regime* r, bq_instance** out, double* n_used,
                                         double* gamma_used, int* rounded);
BQ_API void bq_instance_free(bq_instance* q);
BQ_API bq_status bq_instance_info_get(const bq_instance* q, bq_instance_info* out);

/* ---- exact engine ---- */

typedef struct bq_roots_info {
  size_t count;
  double r0;
  double residual_max;
  double condition;
  int iterations_max;
} bq_roots_info;

typedef enum bq_method { BQ_METHOD_ZEROS = 0, BQ_METHOD_CONTOUR = 1, BQ_METHOD_BOTH = 2 } bq_method;

typedef struct bq_exact_summary {
  double mean;
  double variance;
  double p0;
  bq_method method;
  double cross_check_gap;
  double radius;
  size_t nodes;
} bq_exact_summary;

BQ_API bq_status bq_find_r0(const bq_instance* q, double* out);
/* threads = 0 picks the hardware concurrency */
BQ_API bq_status bq_roots_compute(const bq_instance* q, unsigned threads, bq_roots** out);
BQ_API void bq_roots_free(bq_roots* r);
BQ_API bq_status bq_roots_info_get(const bq_roots* r, bq_roots_info* out);
/* Copies up to cap roots into re/im. */
BQ_API bq_status bq_roots_get(const bq_roots* r, double* re, double* im, size_t cap);

BQ_API bq_status bq_mean_exact(const bq_instance* q, const bq_roots* r, double* out);
BQ_API bq_status bq_pgf_product(const bq_instance* q, const bq_roots* r, double w_re, double w_im, double* out_re,
                                double* out_im);
/* radius <= 0 selects the default sqrt(r0) */
BQ_API bq_status bq_pgf_contour(const bq_instance* q, double w_re, double w_im, double radius, double* out_re,
                                double* out_im);
BQ_API bq_status bq_contour_moments(const bq_instance* q, double radius, bq_exact_summary* out);
BQ_API bq_status bq_exact_summary_compute(const bq_instance* q, const bq_roots* r, double radius,
                                          bq_exact_summary* out);
BQ_API bq_status bq_identity_check(const bq_instance* q, const bq_roots* r, const double* w_re, const double* w_im,
                                   size_t count, double radius, double* max_gap);
/* out must hold j_max + 1 values */
BQ_API bq_status bq_distribution(const bq_instance* q, const bq_roots* r, int j_max, double* out);

/* ---- asymptotics ---- */

typedef struct bq_saddle {
  double z_sp;
  double g_at;
  double g2_at;
  double g3_at;
  double B;
  double a1;
  double a2;
  double a3;
  double c2;
  double residual;
} bq_saddle;

typedef struct bq_variance_forms {
  double value;
  int has_head;
  double head;
  int has_bracket;
  double bracket;
} bq_variance_forms;

typedef struct bq_empty_forms {
  double ln_p0;
  int has_series;
  double series;
  int has_log_form;
  double log_form;
} bq_empty_forms;

typedef struct bq_grw {
  double beta;
  double walk;
  double leading;
  double gap;
} bq_grw;

BQ_API bq_status bq_saddle_point(const bq_instance* q, const bq_regime* r, bq_saddle* out);
BQ_API bq_status bq_mu_standard_saddle(const bq_instance* q, const bq_saddle* sp, double* out, int* near_critical);
BQ_API bq_status bq_mu_leading(const bq_regime* r, double* out);
BQ_API bq_status bq_mu_simple(const bq_regime* r, double* out);
BQ_API bq_status bq_mu_three_term(const bq_regime* r, double* out);
BQ_API bq_status bq_mu_moderate_bound(const bq_regime* r, double* b0, double* exponent);
BQ_API bq_status bq_mu_corrected_half(const bq_instance* q, const bq_regime* r, double* out);
BQ_API bq_status bq_mu_corrected_poisson(const bq_regime* r, double* out);
BQ_API bq_status bq_var_leading(const bq_regime* r, bq_variance_forms* out);
BQ_API bq_status bq_p0_leading(const bq_regime* r, bq_empty_forms* out);
BQ_API bq_status bq_grw_consistency(const bq_regime* r, bq_grw* out);

/* ---- simulation ---- */

typedef struct bq_sim_config {
  int64_t warmup_periods;
  int64_t measured_periods;
  int batches;
  uint64_t seed;
} bq_sim_config;

typedef struct bq_sim_estimate {
  double mean;
  double variance;
  double p0;
  double ci_halfwidth_mean;
  double ci_halfwidth_variance;
  double ci_halfwidth_p0;
  int64_t periods_simulated;
} bq_sim_estimate;

BQ_API bq_status bq_sim_default_config(const bq_instance* q, int64_t measured, int batches, uint64_t seed,
                                       bq_sim_config* out);
BQ_API bq_status bq_simulate(const bq_instance* q, const bq_sim_config* c, bq_sim_estimate* out);
/* out must hold replications estimates */
BQ_API bq_status bq_simulate_replications(const bq_instance* q, const bq_sim_config* c, int replications,
                                          unsigned threads, bq_sim_estimate* out);

/* ---- M/M/s reference ---- */

BQ_API bq_status bq_erlang_c_mean_queue(int s, double rho, double* out);
BQ_API bq_status bq_erlang_c_mean_queue_direct(int s, double rho, double* out);
BQ_API bq_status bq_slope_fit(double alpha, double gamma, const int* s_grid, size_t count, double* out);

/* ---- self-check suite ---- */

typedef void (*bq_property_cb)(const char* name, int passed, const char* detail, void* user);

/* Runs every property; callback may be NULL. */
BQ_API bq_status bq_validate(bq_property_cb cb, void* user, int* passed, int* failed);

#ifdef __cplusplus
}
#endif

#endif
