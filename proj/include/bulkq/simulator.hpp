#pragma once

// Monte Carlo estimates for Q_{k+1} = max(Q_k + A_k - s, 0) from Q_0 = 0,
// with batch-means confidence intervals.

#include <cstdint>
#include <vector>

#include "bulkq/model.hpp"

namespace bulkq {

struct SimConfig {
  std::int64_t warmup_periods = 0;
  std::int64_t measured_periods = 1'000'000;
  int batches = 20;
  std::uint64_t seed = 1;

  /// measured/batches/seed as given; warmup from the relaxation heuristic.
  static SimConfig for_instance(const QueueInstance& q, std::int64_t measured, int batches, std::uint64_t seed);
};

/// Smallest admissible warmup, 10 s/(s - mu_A).
std::int64_t minimum_warmup(const QueueInstance& q);

struct SimEstimate {
  double mean = 0.0;
  double variance = 0.0;
  double p0 = 0.0;
  double ci_halfwidth_mean = 0.0;      // 95%, batch means
  double ci_halfwidth_variance = 0.0;  // 95%, batch variances
  double ci_halfwidth_p0 = 0.0;        // 95%, batch empty fractions
  std::int64_t periods_simulated = 0;  // warmup + measured
};

SimEstimate simulate(const QueueInstance& q, const SimConfig& config);

/// Independent replications with seeds derived from config.seed; run concurrently.
std::vector<SimEstimate> simulate_replications(const QueueInstance& q, const SimConfig& config, int replications,
                                               unsigned threads = 0);

/// Seed of replication i derived from a base seed.
std::uint64_t replication_seed(std::uint64_t base, int index);

}  // namespace bulkq
