#pragma once

// Exact stationary analysis of Q_{k+1} = max(Q_k + A_k - s, 0): the zeros of
// z^s - A(z), the product form of the queue-length pgf, contour integrals
// for its moments, and recovery of the distribution.

#include <optional>
#include <span>
#include <vector>

#include "bulkq/model.hpp"

namespace bulkq {

struct RootOptions {
  int max_iterations = 10000;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct RootSet {
  std::vector<cplx> inside_roots;  // the s-1 zeros in |z| < 1, ordered by k
  double r0 = 0.0;                 // real zero in (1, radius)
  double residual_max = 0.0;       // max |z^s - A(z)| over inside_roots
  double condition = 0.0;          // max 1/|1 - z_k|
  int iterations_max = 0;          // worst substitution count over k
};

enum class ExactMethod { Zeros, Contour, Both };

struct ExactSummary {
  double mean = 0.0;
  double variance = 0.0;
  double p0 = 1.0;
  ExactMethod method = ExactMethod::Contour;
  double cross_check_gap = 0.0;  // max relative disagreement when method == Both
  double radius = 0.0;           // contour radius used
  std::size_t nodes = 0;         // trapezoid nodes at convergence
};

/// Real minimiser of z^{-s} A(z) on (1, radius).
double real_saddle(const QueueInstance& q);

double find_r0(const QueueInstance& q);

RootSet inside_roots(const QueueInstance& q, const RootOptions& opts = {});

double mean_exact(const QueueInstance& q, const RootSet& roots);

/// Q(w) from the zeros; requires |w| < r0.
cplx pgf_product(const QueueInstance& q, const RootSet& roots, cplx w);

/// Default contour radius sqrt(r0).
double default_contour_radius(const QueueInstance& q, double r0);

ExactSummary contour_moments(const QueueInstance& q, std::optional<double> radius = std::nullopt);

/// Q(w) from the contour integral of log((w-z)/(1-z)) d log(z^s - A(z)); |w| < radius.
cplx pgf_contour(const QueueInstance& q, cplx w, std::optional<double> radius = std::nullopt);

/// Max relative gap between pgf_contour and pgf_product over w_list.
double pollaczek_identity_check(const QueueInstance& q, const RootSet& roots, std::span<const cplx> w_list,
                                std::optional<double> radius = std::nullopt);

/// P(Q = j), j = 0..j_max, by discrete Fourier inversion of Q on a circle inside the unit disk.
std::vector<double> distribution(const QueueInstance& q, const RootSet& roots, int j_max);

/// Mean and P(Q=0) from both routes plus the contour variance.
ExactSummary exact_summary(const QueueInstance& q, const RootSet& roots, std::optional<double> radius = std::nullopt);

}  // namespace bulkq
