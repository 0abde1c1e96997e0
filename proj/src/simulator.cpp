#include "bulkq/simulator.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "bulkq/error.hpp"

namespace bulkq {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> aggregate_pmf(const std::vector<double>& pmf, int n) {
  std::vector<double> out{1.0};
  for (int i = 0; i < n; ++i) {
    std::vector<double> next(out.size() + pmf.size() - 1, 0.0);
    for (std::size_t a = 0; a < out.size(); ++a) {
      if (out[a] == 0.0) continue;
      for (std::size_t b = 0; b < pmf.size(); ++b) next[a + b] += out[a] * pmf[b];
    }
    out = std::move(next);
  }
  return out;
}

using Sampler = std::function<std::int64_t(std::mt19937_64&)>;

Sampler make_sampler(const QueueInstance& q) {
  const DemandPgf& x = q.demand();
  switch (x.kind()) {
    case DemandKind::Poisson: {
      std::poisson_distribution<std::int64_t> d(q.mu_a());
      return [d](std::mt19937_64& g) mutable { return d(g); };
    }
    case DemandKind::Geometric: {
      // Negative binomial with real shape n as a gamma-mixed Poisson.
      const double p = x.param();
      std::gamma_distribution<double> mix(q.n(), (1.0 - p) / p);
      return [mix](std::mt19937_64& g) mutable {
        std::poisson_distribution<std::int64_t> d(mix(g));
        return d(g);
      };
    }
    case DemandKind::Binomial: {
      std::binomial_distribution<std::int64_t> d(static_cast<std::int64_t>(q.n()) * x.trials(), x.param());
      return [d](std::mt19937_64& g) mutable { return d(g); };
    }
    case DemandKind::ExplicitPmf: {
      const auto pmf = aggregate_pmf(x.pmf(), static_cast<int>(q.n()));
      std::discrete_distribution<std::int64_t> d(pmf.begin(), pmf.end());
      return [d](std::mt19937_64& g) mutable { return d(g); };
    }
  }
  fail(ErrorCode::Unsupported, "simulate: no sampler for demand kind");
}

double t_quantile_975(int dof) {
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.975);
}

struct BatchStats {
  double mean = 0.0;
  double halfwidth = 0.0;
};

BatchStats batch_ci(const std::vector<double>& v) {
  const double b = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= b;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / (b - 1.0));
  return {m, t_quantile_975(static_cast<int>(v.size()) - 1) * sd / std::sqrt(b)};
}

}  // namespace

std::int64_t minimum_warmup(const QueueInstance& q) {
  return static_cast<std::int64_t>(std::ceil(10.0 * q.s() / (q.s() - q.mu_a())));
}

SimConfig SimConfig::for_instance(const QueueInstance& q, std::int64_t measured, int batches, std::uint64_t seed) {
  SimConfig c;
  const double gap = q.s() - q.mu_a();
  const double relax = 10.0 * q.sigma2_a() / (gap * gap);
  c.warmup_periods = std::max(minimum_warmup(q), static_cast<std::int64_t>(std::ceil(relax)));
  c.measured_periods = measured;
  c.batches = batches;
  c.seed = seed;
  return c;
}

std::uint64_t replication_seed(std::uint64_t base, int index) {
  std::uint64_t state = base ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(index + 1));
  return splitmix64(state);
}

SimEstimate simulate(const QueueInstance& q, const SimConfig& config) {
  require(q.mu_a() < q.s(), ErrorCode::Unstable, "simulate: unstable instance");
  require(config.batches >= 20, ErrorCode::InvalidArgument, "simulate: need at least 20 batches");
  require(config.measured_periods > 0 && config.measured_periods % config.batches == 0, ErrorCode::InvalidArgument,
          "simulate: measured_periods must be a positive multiple of batches");
  require(config.warmup_periods >= minimum_warmup(q) || q.degenerate(), ErrorCode::InvalidArgument,
          "simulate: warmup below 10 s/(s - mu_A) periods");

  SimEstimate out;
  out.periods_simulated = config.warmup_periods + config.measured_periods;
  if (q.degenerate()) {
    out.p0 = 1.0;
    return out;
  }

  std::uint64_t state = config.seed;
  std::mt19937_64 gen(splitmix64(state));
  Sampler sample = make_sampler(q);
  const std::int64_t s = q.s();

  std::int64_t queue = 0;
  for (std::int64_t k = 0; k < config.warmup_periods; ++k) queue = std::max<std::int64_t>(queue + sample(gen) - s, 0);

  const std::int64_t per_batch = config.measured_periods / config.batches;
  std::vector<double> means, vars, empties;
  double total = 0.0, total_sq = 0.0, total_empty = 0.0;
  for (int b = 0; b < config.batches; ++b) {
    double sum = 0.0, sum_sq = 0.0, empty = 0.0;
    for (std::int64_t k = 0; k < per_batch; ++k) {
      queue = std::max<std::int64_t>(queue + sample(gen) - s, 0);
      const double v = static_cast<double>(queue);
      sum += v;
      sum_sq += v * v;
      empty += queue == 0 ? 1.0 : 0.0;
    }
    const double m = sum / per_batch;
    means.push_back(m);
    vars.push_back(sum_sq / per_batch - m * m);
    empties.push_back(empty / per_batch);
    total += sum;
    total_sq += sum_sq;
    total_empty += empty;
  }
  const double count = static_cast<double>(config.measured_periods);
  out.mean = total / count;
  out.variance = total_sq / count - out.mean * out.mean;
  out.p0 = total_empty / count;
  out.ci_halfwidth_mean = batch_ci(means).halfwidth;
  out.ci_halfwidth_variance = batch_ci(vars).halfwidth;
  out.ci_halfwidth_p0 = batch_ci(empties).halfwidth;
  return out;
}

std::vector<SimEstimate> simulate_replications(const QueueInstance& q, const SimConfig& config, int replications,
                                               unsigned threads) {
  require(replications >= 1, ErrorCode::InvalidArgument, "simulate_replications: need at least one replication");
  std::vector<SimEstimate> out(static_cast<std::size_t>(replications));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(replications));
  const auto work = [&](unsigned t) {
    for (int i = static_cast<int>(t); i < replications; i += static_cast<int>(threads)) {
      SimConfig c = config;
      c.seed = replication_seed(config.seed, i);
      out[i] = simulate(q, c);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  return out;
}

}  // namespace bulkq
