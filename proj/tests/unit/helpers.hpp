#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "bulkq/model.hpp"

namespace testing {

inline bulkq::QueueInstance poisson_instance(int s, double alpha, double gamma) {
  const auto d = bulkq::DemandPgf::poisson(1.0);
  return bulkq::make_instance(d, bulkq::Regime::create(s, alpha, gamma, d)).instance;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Stationary law of Q' = max(Q + A - s, 0) by iterating the chain's
/// transition on a truncated state space, given P(A = j).
inline std::vector<double> lindley_stationary(const std::vector<double>& a, int s, int states, int max_iter = 200000) {
  std::vector<double> p(states, 0.0), next(states);
  p[0] = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int q = 0; q < states; ++q) {
      if (p[q] == 0.0) continue;
      for (std::size_t j = 0; j < a.size(); ++j) {
        const int to = std::max(q + static_cast<int>(j) - s, 0);
        if (to < states) next[to] += p[q] * a[j];
      }
    }
    double total = 0, diff = 0;
    for (double v : next) total += v;
    for (int q = 0; q < states; ++q) {
      next[q] /= total;
      diff = std::max(diff, std::fabs(next[q] - p[q]));
    }
    p.swap(next);
    if (diff < 1e-15) break;
  }
  return p;
}

inline std::vector<double> poisson_pmf(double mean, int len) {
  std::vector<double> out(len);
  for (int j = 0; j < len; ++j) out[j] = std::exp(j * std::log(mean) - mean - std::lgamma(j + 1.0));
  return out;
}

inline double mean_of(const std::vector<double>& p) {
  double m = 0;
  for (std::size_t j = 0; j < p.size(); ++j) m += j * p[j];
  return m;
}

inline double variance_of(const std::vector<double>& p) {
  const double m = mean_of(p);
  double v = 0;
  for (std::size_t j = 0; j < p.size(); ++j) v += (j - m) * (j - m) * p[j];
  return v;
}

}  // namespace testing
