// Command-line front end over the libbulkq C interface.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bulkq/bulkq.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int code;
  std::string message;
};

void check(bq_status st, const std::string& what) {
  if (st != BQ_OK) throw CliError{kExitUsage, what + ": " + bq_status_name(st) + ": " + bq_last_error()};
}

struct DemandDeleter {
  void operator()(bq_demand* d) const { bq_demand_free(d); }
};
struct InstanceDeleter {
  void operator()(bq_instance* q) const { bq_instance_free(q); }
};
struct RootsDeleter {
  void operator()(bq_roots* r) const { bq_roots_free(r); }
};
using Demand = std::unique_ptr<bq_demand, DemandDeleter>;
using Instance = std::unique_ptr<bq_instance, InstanceDeleter>;
using Roots = std::unique_ptr<bq_roots, RootsDeleter>;

struct Options {
  std::string model = "poisson";
  std::optional<double> mu;
  std::optional<double> sigma2;
  std::optional<int> trials;
  std::vector<double> pmf;
  std::optional<int> s;
  std::vector<int> s_grid;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::string out;
  std::uint64_t seed = 1;
  int precision = 3;
  std::string config;
  std::string golden;
  int j_max = -1;
  int threads = 0;
  std::int64_t sim_periods = 0;
};

Demand build_demand(const Options& o, Demand from_config) {
  const bool model_flags = o.mu || o.sigma2 || o.trials || !o.pmf.empty();
  if (from_config && !model_flags) return from_config;
  bq_demand* d = nullptr;
  const double mu = o.mu.value_or(1.0);
  if (o.model == "poisson") {
    if (o.sigma2 && std::fabs(*o.sigma2 - mu) > 1e-12 * mu)
      throw CliError{kExitUsage, "poisson demand needs sigma2 == mu"};
    check(bq_demand_poisson(mu, &d), "poisson demand");
  } else if (o.model == "geometric") {
    const double p = 1.0 / (1.0 + mu);
    if (o.sigma2 && std::fabs(*o.sigma2 - mu * (1.0 + mu)) > 1e-12 * mu)
      throw CliError{kExitUsage, "geometric demand needs sigma2 == mu (1 + mu)"};
    check(bq_demand_geometric(p, &d), "geometric demand");
  } else if (o.model == "binomial") {
    int trials = 0;
    double prob = 0.0;
    if (o.trials) {
      trials = *o.trials;
      prob = mu / trials;
    } else {
      if (!o.sigma2) throw CliError{kExitUsage, "binomial demand needs --trials or --sigma2"};
      prob = 1.0 - *o.sigma2 / mu;
      const double t = mu / prob;
      if (!(prob > 0.0) || std::fabs(t - std::round(t)) > 1e-9)
        throw CliError{kExitUsage, "binomial demand: mu/(1 - sigma2/mu) must be a positive integer"};
      trials = static_cast<int>(std::round(t));
    }
    check(bq_demand_binomial(trials, prob, &d), "binomial demand");
  } else if (o.model == "pmf") {
    if (o.pmf.empty()) throw CliError{kExitUsage, "pmf demand needs --pmf"};
    check(bq_demand_pmf(o.pmf.data(), o.pmf.size(), &d), "pmf demand");
  } else {
    throw CliError{kExitUsage, "unknown model '" + o.model + "'"};
  }
  return Demand(d);
}

struct Context {
  Demand demand;
  double mu_x = 0.0;
  double sigma2_x = 0.0;
};

Context make_context(Options& o) {
  Demand from_config;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw CliError{kExitUsage, "cannot read config file " + o.config};
    std::stringstream ss;
    ss << in.rdbuf();
    bq_config cfg{};
    check(bq_config_parse(ss.str().c_str(), &cfg), "config");
    from_config.reset(cfg.demand);
    if (cfg.has_s && !o.s) o.s = cfg.s;
    if (cfg.has_alpha && !o.alpha) o.alpha = cfg.alpha;
    if (cfg.has_gamma && !o.gamma) o.gamma = cfg.gamma;
  }
  Context c;
  c.demand = build_demand(o, std::move(from_config));
  check(bq_demand_moments(c.demand.get(), &c.mu_x, &c.sigma2_x), "moments");
  return c;
}

class Table {
 public:
  Table(std::vector<std::string> header, int precision) : header_(std::move(header)), precision_(precision) {}

  void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  std::string num(double v) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision_, v);
    return buf;
  }

  std::string render() const {
    std::ostringstream os;
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
    return os.str();
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }

  std::vector<std::string> header_;
  int precision_;
  std::vector<std::vector<std::string>> rows_;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw CliError{kExitUsage, "cannot write " + o.out};
  f << text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

int decimals(const std::string& cell) {
  const auto dot = cell.find('.');
  return dot == std::string::npos ? 0 : static_cast<int>(cell.size() - dot - 1);
}

// Cells must agree to within one unit in the golden file's last printed digit.
int compare_golden(const Options& o, const Table& t, const std::string& name) {
  const std::string path = o.golden + "/" + name + ".csv";
  std::ifstream in(path);
  if (!in) throw CliError{kExitUsage, "cannot read golden file " + path};
  std::string line;
  std::getline(in, line);
  if (split_csv_line(line) != t.header()) {
    std::cerr << "golden header mismatch in " << path << "\n";
    return kExitValidation;
  }
  int bad = 0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto g = split_csv_line(line);
    if (row >= t.rows().size() || g.size() != t.rows()[row].size()) {
      std::cerr << "golden row " << row << " shape mismatch\n";
      return kExitValidation;
    }
    for (std::size_t c = 0; c < g.size(); ++c) {
      const double want = std::stod(g[c]);
      const double got = std::stod(t.rows()[row][c]);
      const double unit = std::pow(10.0, -decimals(g[c]));
      if (std::fabs(got - want) > unit * (1.0 + 1e-9)) {
        std::cerr << "golden mismatch " << name << " row " << row << " col " << t.header()[c] << ": got "
                  << t.rows()[row][c] << " want " << g[c] << "\n";
        ++bad;
      }
    }
    ++row;
  }
  if (row != t.rows().size()) {
    std::cerr << "golden row count mismatch\n";
    return kExitValidation;
  }
  std::cerr << name << ": " << (bad ? "MISMATCH" : "matches golden") << " (" << path << ")\n";
  return bad ? kExitValidation : 0;
}

struct Point {
  bq_regime regime{};  // gamma adjusted for any rounding of n
  Instance instance;
  Roots roots;
};

Point solve_point(const Context& c, int s, double alpha, double gamma, unsigned threads) {
  Point p;
  p.regime = bq_regime{s, alpha, gamma, c.mu_x, c.sigma2_x};
  bq_instance* q = nullptr;
  double gamma_used = gamma;
  check(bq_instance_from_regime(c.demand.get(), &p.regime, &q, nullptr, &gamma_used, nullptr), "instance");
  p.instance.reset(q);
  p.regime.gamma = gamma_used;
  bq_roots* r = nullptr;
  check(bq_roots_compute(q, threads, &r), "roots");
  p.roots.reset(r);
  return p;
}

double rho_of(const bq_regime& r) {
  bq_regime_info info{};
  check(bq_regime_check(&r, &info), "regime");
  return info.rho;
}

std::vector<int> default_grid(const Options& o) {
  if (!o.s_grid.empty()) return o.s_grid;
  return {10, 20, 50, 100, 200, 500, 1000};
}

int cmd_half_table(Options& o, double default_gamma, const std::string& name) {
  Context c = make_context(o);
  const double gamma = o.gamma.value_or(default_gamma);
  Table t({"s", "rho", "mu_exact", "mu_134", "mu_136"}, o.precision);
  for (int s : default_grid(o)) {
    Point p = solve_point(c, s, 0.5, gamma, o.threads);
    double exact = 0, lead = 0, corr = 0;
    check(bq_mean_exact(p.instance.get(), p.roots.get(), &exact), "mean");
    check(bq_mu_leading(&p.regime, &lead), "leading");
    check(bq_mu_corrected_half(p.instance.get(), &p.regime, &corr), "corrected");
    t.add_row({std::to_string(s), t.num(rho_of(p.regime)), t.num(exact), t.num(lead), t.num(corr)});
  }
  emit(o, t.render());
  return o.golden.empty() ? 0 : compare_golden(o, t, name);
}

int cmd_table3(Options& o) {
  Context c = make_context(o);
  const double gamma = o.gamma.value_or(0.1);
  const double alphas[] = {0.6, 0.75, 0.9};
  Table t({"s", "mu_exact_a06", "mu_134_a06", "mu_exact_a075", "mu_134_a075", "mu_exact_a09", "mu_134_a09"},
          o.precision);
  for (int s : default_grid(o)) {
    std::vector<std::string> row{std::to_string(s)};
    for (double a : alphas) {
      Point p = solve_point(c, s, a, gamma, o.threads);
      double exact = 0, lead = 0;
      check(bq_mean_exact(p.instance.get(), p.roots.get(), &exact), "mean");
      check(bq_mu_leading(&p.regime, &lead), "leading");
      row.push_back(t.num(exact));
      row.push_back(t.num(lead));
    }
    t.add_row(row);
  }
  emit(o, t.render());
  return o.golden.empty() ? 0 : compare_golden(o, t, "table3");
}

int cmd_sweep(Options& o) {
  Context c = make_context(o);
  const double alpha = o.alpha.value_or(0.5);
  const double gamma = o.gamma.value_or(1.0);
  std::vector<std::string> header{"s",      "rho",           "mu_exact", "var_exact",   "p0_exact",
                                  "mu_134", "mu_three_term", "mu_136",   "var_leading", "p0_leading"};
  const bool sim = o.sim_periods > 0;
  if (sim) header.insert(header.end(), {"sim_mean", "sim_ci"});
  Table t(header, o.precision);
  int status = 0;
  for (int s : default_grid(o)) {
    try {
      Point p = solve_point(c, s, alpha, gamma, o.threads);
      bq_exact_summary ex{};
      check(bq_exact_summary_compute(p.instance.get(), p.roots.get(), 0.0, &ex), "exact");
      std::vector<std::string> row{std::to_string(s), t.num(rho_of(p.regime)), t.num(ex.mean), t.num(ex.variance),
                                   t.num(ex.p0)};
      double v = 0;
      if (alpha >= 0.5) {
        check(bq_mu_leading(&p.regime, &v), "leading");
        row.push_back(t.num(v));
        check(bq_mu_three_term(&p.regime, &v), "three-term");
        row.push_back(t.num(v));
      } else {
        row.insert(row.end(), {"", ""});
      }
      row.push_back(std::fabs(alpha - 0.5) < 1e-12 && bq_mu_corrected_half(p.instance.get(), &p.regime, &v) == BQ_OK
                        ? t.num(v)
                        : "");
      bq_variance_forms vf{};
      bq_empty_forms ef{};
      if (alpha >= 0.5 && alpha < 1.0) {
        check(bq_var_leading(&p.regime, &vf), "variance");
        check(bq_p0_leading(&p.regime, &ef), "empty probability");
        row.push_back(t.num(vf.value));
        row.push_back(t.num(std::exp(ef.ln_p0)));
      } else {
        row.insert(row.end(), {"", ""});
      }
      if (sim) {
        bq_sim_config sc{};
        bq_sim_estimate se{};
        check(bq_sim_default_config(p.instance.get(), o.sim_periods, 20, o.seed, &sc), "simulation config");
        check(bq_simulate(p.instance.get(), &sc, &se), "simulation");
        row.push_back(t.num(se.mean));
        row.push_back(t.num(se.ci_halfwidth_mean));
      }
      t.add_row(row);
    } catch (const CliError& e) {
      std::cerr << "s = " << s << ": " << e.message << "\n";
      std::vector<std::string> row(header.size());
      row[0] = std::to_string(s);
      row[1] = "ERROR";
      t.add_row(row);
      status = kExitUsage;
    }
  }
  emit(o, t.render());
  return status;
}

int cmd_dist(Options& o) {
  Context c = make_context(o);
  Point p = solve_point(c, o.s.value_or(10), o.alpha.value_or(0.5), o.gamma.value_or(1.0), o.threads);
  int j_max = o.j_max;
  if (j_max < 0) {
    double mean = 0;
    check(bq_mean_exact(p.instance.get(), p.roots.get(), &mean), "mean");
    j_max = static_cast<int>(std::ceil(50.0 * (1.0 + mean)));
  }
  std::vector<double> prob(static_cast<std::size_t>(j_max) + 1);
  check(bq_distribution(p.instance.get(), p.roots.get(), j_max, prob.data()), "distribution");
  Table t({"j", "p"}, std::max(o.precision, 12));
  for (int j = 0; j <= j_max; ++j) t.add_row({std::to_string(j), t.num(prob[j])});
  emit(o, t.render());
  return 0;
}

int cmd_mms(Options& o) {
  const double alpha = o.alpha.value_or(0.75);
  const double gamma = o.gamma.value_or(0.1);
  std::vector<int> grid = o.s_grid.empty() ? std::vector<int>{10, 32, 100, 316, 1000, 3162, 10000} : o.s_grid;
  Table t({"s", "Lq"}, o.precision);
  for (int s : grid) {
    double lq = 0;
    check(bq_erlang_c_mean_queue(s, 1.0 - gamma / std::pow(static_cast<double>(s), alpha), &lq), "erlang c");
    t.add_row({std::to_string(s), t.num(lq)});
  }
  double slope = 0;
  check(bq_slope_fit(alpha, gamma, grid.data(), grid.size(), &slope), "slope");
  t.add_row({"slope", t.num(slope)});
  emit(o, t.render());
  return 0;
}

int cmd_validate(Options& o) {
  std::ostringstream os;
  int passed = 0, failed = 0;
  auto cb = [](const char* name, int ok, const char* detail, void* user) {
    *static_cast<std::ostringstream*>(user) << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
  };
  check(bq_validate(cb, &os, &passed, &failed), "validate");
  os << passed << " passed, " << failed << " failed\n";
  emit(o, os.str());
  return failed ? kExitValidation : 0;
}

int cmd_grw(Options& o) {
  Context c = make_context(o);
  bq_regime r{o.s.value_or(10000), 0.5, o.gamma.value_or(1.0), c.mu_x, c.sigma2_x};
  bq_grw g{};
  check(bq_grw_consistency(&r, &g), "grw");
  const int p = std::max(o.precision, 6);
  Table t({"s", "beta", "walk_mean", "mu_134", "relative_gap"}, p);
  t.add_row({std::to_string(r.s), t.num(g.beta), t.num(g.walk), t.num(g.leading), t.num(g.gap)});
  emit(o, t.render());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary analysis of the discrete bulk-service queue"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--model", o.model, "poisson | geometric | binomial | pmf")->capture_default_str();
  app.add_option("--mu", o.mu, "per-source demand mean");
  app.add_option("--sigma2", o.sigma2, "per-source demand variance (consistency check, fixes binomial trials)");
  app.add_option("--trials", o.trials, "binomial trials per source");
  app.add_option("--pmf", o.pmf, "explicit per-source pmf p0,p1,...")->delimiter(',');
  app.add_option("--s", o.s, "capacity s");
  app.add_option("--s-grid", o.s_grid, "comma separated list of s")->delimiter(',');
  app.add_option("--alpha", o.alpha, "scaling exponent");
  app.add_option("--gamma", o.gamma, "scaling constant");
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--precision", o.precision, "decimals per numeric cell")->capture_default_str();
  app.add_option("--config", o.config, "key = value model file; flags win");
  app.add_option("--golden", o.golden, "directory of golden CSV files to compare against");
  app.add_option("--jmax", o.j_max, "largest j for dist");
  app.add_option("--threads", o.threads, "root-finder threads (0 = all cores)");
  app.add_option("--sim-periods", o.sim_periods, "sweep: also simulate this many periods per row (20 batches, --seed)");

  auto* t1 = app.add_subcommand("table1", "mean congestion, gamma = 1, alpha = 1/2");
  auto* t2 = app.add_subcommand("table2", "mean congestion, gamma = 0.1, alpha = 1/2");
  auto* t3 = app.add_subcommand("table3", "mean congestion, gamma = 0.1, alpha in {0.6, 0.75, 0.9}");
  auto* sw = app.add_subcommand("sweep", "exact and asymptotic quantities over an s grid");
  auto* di = app.add_subcommand("dist", "stationary distribution P(Q = j)");
  auto* mm = app.add_subcommand("mms_compare", "M/M/s mean queue length and log-log slope");
  auto* va = app.add_subcommand("validate", "run the self-check suite");
  auto* gr = app.add_subcommand("grw_check", "Gaussian random walk consistency at alpha = 1/2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  if (o.precision < 0 || o.precision > 17) {
    std::cerr << "error: --precision must be in 0..17\n";
    return kExitUsage;
  }

  try {
    if (*t1) return cmd_half_table(o, 1.0, "table1");
    if (*t2) return cmd_half_table(o, 0.1, "table2");
    if (*t3) return cmd_table3(o);
    if (*sw) return cmd_sweep(o);
    if (*di) return cmd_dist(o);
    if (*mm) return cmd_mms(o);
    if (*va) return cmd_validate(o);
    if (*gr) return cmd_grw(o);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
