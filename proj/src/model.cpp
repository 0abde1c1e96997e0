#include "bulkq/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "bulkq/error.hpp"

namespace bulkq {

std::string_view to_string(DemandKind kind) {
  switch (kind) {
    case DemandKind::Poisson: return "poisson";
    case DemandKind::Geometric: return "geometric";
    case DemandKind::Binomial: return "binomial";
    case DemandKind::ExplicitPmf: return "pmf";
  }
  return "unknown";
}

DemandPgf DemandPgf::poisson(double rate) {
  require(rate > 0.0 && std::isfinite(rate), ErrorCode::InvalidArgument, "poisson: rate must be > 0");
  DemandPgf d;
  d.kind_ = DemandKind::Poisson;
  d.param_ = rate;
  d.mean_ = rate;
  d.variance_ = rate;
  d.radius_ = std::numeric_limits<double>::infinity();
  return d;
}

DemandPgf DemandPgf::geometric(double success_prob) {
  require(success_prob > 0.0 && success_prob < 1.0, ErrorCode::InvalidArgument,
          "geometric: success probability must lie in (0, 1)");
  DemandPgf d;
  d.kind_ = DemandKind::Geometric;
  d.param_ = success_prob;
  const double q = 1.0 - success_prob;
  d.mean_ = q / success_prob;
  d.variance_ = q / (success_prob * success_prob);
  d.radius_ = 1.0 / q;
  return d;
}

DemandPgf DemandPgf::binomial(int trials, double prob) {
  require(trials >= 1, ErrorCode::InvalidArgument, "binomial: trials must be >= 1");
  require(prob > 0.0 && prob < 1.0, ErrorCode::InvalidArgument, "binomial: probability must lie in (0, 1)");
  DemandPgf d;
  d.kind_ = DemandKind::Binomial;
  d.param_ = prob;
  d.trials_ = trials;
  d.mean_ = trials * prob;
  d.variance_ = trials * prob * (1.0 - prob);
  d.radius_ = std::numeric_limits<double>::infinity();
  return d;
}

DemandPgf DemandPgf::explicit_pmf(std::vector<double> pmf) {
  while (!pmf.empty() && pmf.back() == 0.0) pmf.pop_back();
  require(!pmf.empty(), ErrorCode::InvalidArgument, "pmf: no positive mass");
  double total = 0.0;
  for (double p : pmf) {
    require(p >= 0.0 && std::isfinite(p), ErrorCode::InvalidArgument, "pmf: entries must be finite and >= 0");
    total += p;
  }
  require(std::fabs(total - 1.0) <= 1e-9, ErrorCode::InvalidArgument, "pmf: probabilities must sum to 1");
  for (double& p : pmf) p /= total;
  DemandPgf d;
  d.kind_ = DemandKind::ExplicitPmf;
  d.pmf_ = std::move(pmf);
  d.radius_ = std::numeric_limits<double>::infinity();
  d.finalize_pmf_moments();
  return d;
}

void DemandPgf::finalize_pmf_moments() {
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < pmf_.size(); ++j) {
    m1 += j * pmf_[j];
    m2 += static_cast<double>(j) * j * pmf_[j];
  }
  mean_ = m1;
  variance_ = m2 - m1 * m1;
}

cplx DemandPgf::eval(cplx z, int order) const {
  require(order >= 0 && order <= 3, ErrorCode::InvalidArgument, "pgf_eval: derivative order must be 0..3");
  require(std::abs(z) < radius_, ErrorCode::Domain, "pgf_eval: |z| must be below the radius of convergence");
  switch (kind_) {
    case DemandKind::Poisson:
      return std::pow(param_, order) * std::exp(param_ * (z - 1.0));
    case DemandKind::Geometric: {
      const double c = 1.0 - param_;
      double fact = 1.0;
      for (int k = 2; k <= order; ++k) fact *= k;
      return param_ * fact * std::pow(c, order) / std::pow(1.0 - c * z, order + 1);
    }
    case DemandKind::Binomial: {
      if (order > trials_) return 0.0;
      double falling = 1.0;
      for (int k = 0; k < order; ++k) falling *= trials_ - k;
      return falling * std::pow(param_, order) * std::pow(1.0 - param_ + param_ * z, trials_ - order);
    }
    case DemandKind::ExplicitPmf: {
      cplx acc = 0.0;
      for (std::size_t j = pmf_.size(); j-- > static_cast<std::size_t>(order);) {
        double falling = 1.0;
        for (int k = 0; k < order; ++k) falling *= static_cast<double>(j - k);
        acc = acc * z + falling * pmf_[j];
      }
      return acc;
    }
  }
  return 0.0;
}

std::array<double, 4> DemandPgf::derivatives(double z) const {
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = eval(z, k).real();
  return out;
}

cplx DemandPgf::log_eval(cplx z) const {
  const cplx u = z - 1.0;
  switch (kind_) {
    case DemandKind::Poisson: return param_ * u;
    case DemandKind::Geometric: return -clog1p(-(1.0 - param_) / param_ * u);
    case DemandKind::Binomial: return static_cast<double>(trials_) * clog1p(param_ * u);
    case DemandKind::ExplicitPmf: {
      if (std::abs(u) < 0.5) {
        // X(z) - 1 = sum p_j (z^j - 1), formed without cancellation.
        const cplx lz = clog1p(u);
        cplx shift = 0.0;
        for (std::size_t j = 1; j < pmf_.size(); ++j) shift += pmf_[j] * cexpm1(static_cast<double>(j) * lz);
        return clog1p(shift);
      }
      return std::log(eval(z, 0));
    }
  }
  return 0.0;
}

cplx DemandPgf::log_derivative(cplx z) const {
  switch (kind_) {
    case DemandKind::Poisson: return param_;
    case DemandKind::Geometric: {
      const double c = 1.0 - param_;
      return c / (1.0 - c * z);
    }
    case DemandKind::Binomial: return trials_ * param_ / (1.0 - param_ + param_ * z);
    case DemandKind::ExplicitPmf: return eval(z, 1) / eval(z, 0);
  }
  return 0.0;
}

bool DemandPgf::infinitely_divisible() const {
  return kind_ == DemandKind::Poisson || kind_ == DemandKind::Geometric;
}

int DemandPgf::support_gcd() const {
  if (kind_ != DemandKind::ExplicitPmf) return 1;
  int first = -1;
  int g = 0;
  for (std::size_t j = 0; j < pmf_.size(); ++j) {
    if (pmf_[j] <= 0.0) continue;
    if (first < 0) {
      first = static_cast<int>(j);
    } else {
      g = std::gcd(g, static_cast<int>(j) - first);
    }
  }
  return g;
}

bool DemandPgf::degenerate_zero() const { return kind_ == DemandKind::ExplicitPmf && pmf_.size() == 1; }

std::optional<int> DemandPgf::degree() const {
  switch (kind_) {
    case DemandKind::Binomial: return trials_;
    case DemandKind::ExplicitPmf: return static_cast<int>(pmf_.size()) - 1;
    default: return std::nullopt;
  }
}

std::string DemandPgf::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
    case DemandKind::Poisson: os << "(rate=" << param_ << ")"; break;
    case DemandKind::Geometric: os << "(p=" << param_ << ")"; break;
    case DemandKind::Binomial: os << "(trials=" << trials_ << ", p=" << param_ << ")"; break;
    case DemandKind::ExplicitPmf: os << "(support=" << pmf_.size() << ")"; break;
  }
  return os.str();
}

Regime Regime::create(int s, double alpha, double gamma, double mu_x, double sigma2_x) {
  require(s >= 1, ErrorCode::InvalidArgument, "regime: s must be >= 1");
  require(alpha >= 0.0 && std::isfinite(alpha), ErrorCode::InvalidArgument, "regime: alpha must be >= 0");
  require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::InvalidArgument, "regime: gamma must be > 0");
  require(mu_x > 0.0 && sigma2_x > 0.0, ErrorCode::InvalidArgument, "regime: demand moments must be > 0");
  Regime r{s, alpha, gamma, mu_x, sigma2_x};
  require(r.rho() > 0.0 && r.rho() < 1.0, ErrorCode::Unstable,
          "regime: need 0 < rho = 1 - gamma/s^alpha < 1 (gamma < s^alpha)");
  return r;
}

double Regime::rho() const { return 1.0 - gamma / std::pow(static_cast<double>(s), alpha); }
double Regime::b0() const { return std::sqrt(b0_squared()); }
double Regime::d_squared() const { return b0_squared() / std::pow(static_cast<double>(s), 2.0 * alpha - 1.0); }
double Regime::d() const { return std::sqrt(d_squared()); }

QueueInstance::QueueInstance(DemandPgf demand, int s, double n) : demand_(std::move(demand)), s_(s), n_(n) {
  require(s_ >= 1, ErrorCode::InvalidArgument, "instance: s must be >= 1");
  require(n_ >= 0.0 && std::isfinite(n_), ErrorCode::InvalidArgument, "instance: n must be >= 0");
  require(demand_.infinitely_divisible() || n_ == std::round(n_), ErrorCode::InvalidArgument,
          "instance: n must be an integer for " + std::string(to_string(demand_.kind())) + " demand");
  require(mu_a() < s_, ErrorCode::Unstable, "instance: unstable, mu_A = n mu_X must be < s");
}

cplx QueueInstance::s_g(cplx z) const { return -static_cast<double>(s_) * clog1p(z - 1.0) + log_a(z); }

cplx QueueInstance::s_g_prime(cplx z) const { return -static_cast<double>(s_) / z + n_ * demand_.log_derivative(z); }

bool QueueInstance::has_mass_above_capacity() const {
  const auto deg = demand_.degree();
  if (!deg) return true;
  return n_ * *deg > s_;
}

InstanceResult make_instance(const DemandPgf& demand, const Regime& regime) {
  require(!demand.degenerate_zero(), ErrorCode::InvalidArgument,
          "make_instance: degenerate demand has no scaling regime; build QueueInstance directly");
  const double n_real = regime.n_effective();
  double n = n_real;
  double gamma = regime.gamma;
  bool rounded = false;
  if (!demand.infinitely_divisible()) {
    n = std::round(n_real);
    rounded = true;
    require(n >= 1.0, ErrorCode::InvalidArgument, "make_instance: rounded n is zero");
    const double rho = n * demand.mean() / regime.s;
    require(rho < 1.0, ErrorCode::Unstable, "make_instance: rounding n makes the instance unstable (rho >= 1)");
    gamma = (1.0 - rho) * std::pow(static_cast<double>(regime.s), regime.alpha);
  }
  InstanceResult out{QueueInstance(demand, regime.s, n), n, gamma, rounded, {}};
  if (!out.instance.has_mass_above_capacity()) {
    out.warnings.push_back("n * degree(X) <= s: A has no mass above capacity, no outside zero r0 exists");
  }
  return out;
}

namespace {

std::string_view trim(std::string_view v) {
  const auto b = v.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(" \t\r");
  return v.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc() && ptr == v.data() + v.size(), ErrorCode::Parse,
          "config: bad number for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

}  // namespace

ModelConfig parse_model_config(std::string_view text) {
  std::string kind;
  std::optional<double> rate, p, prob, trials;
  std::vector<double> pmf;
  ModelConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, ErrorCode::Parse,
            "config: line " + std::to_string(line_no) + " is not 'key = value'");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "kind" || key == "model") {
      kind = std::string(value);
    } else if (key == "rate" || key == "mu") {
      rate = to_double(key, value);
    } else if (key == "p") {
      p = to_double(key, value);
    } else if (key == "prob") {
      prob = to_double(key, value);
    } else if (key == "trials") {
      trials = to_double(key, value);
    } else if (key == "pmf") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        pmf.push_back(to_double(key, trim(rest.substr(0, comma))));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
    } else if (key == "s") {
      const double v = to_double(key, value);
      require(v == std::round(v) && v >= 1, ErrorCode::Parse, "config: s must be a positive integer");
      cfg.s = static_cast<int>(v);
    } else if (key == "alpha") {
      cfg.alpha = to_double(key, value);
    } else if (key == "gamma") {
      cfg.gamma = to_double(key, value);
    } else {
      fail(ErrorCode::Parse, "config: unknown key '" + std::string(key) + "'");
    }
  }
  if (kind.empty()) return cfg;
  if (kind == "poisson") {
    require(rate.has_value(), ErrorCode::Parse, "config: poisson needs 'rate' (or 'mu')");
    cfg.demand = DemandPgf::poisson(*rate);
  } else if (kind == "geometric") {
    require(p || rate, ErrorCode::Parse, "config: geometric needs 'p' or 'mu'");
    cfg.demand = DemandPgf::geometric(p ? *p : 1.0 / (1.0 + *rate));
  } else if (kind == "binomial") {
    require(trials && prob, ErrorCode::Parse, "config: binomial needs 'trials' and 'prob'");
    cfg.demand = DemandPgf::binomial(static_cast<int>(*trials), *prob);
  } else if (kind == "pmf") {
    require(!pmf.empty(), ErrorCode::Parse, "config: pmf kind needs 'pmf = p0, p1, ...'");
    cfg.demand = DemandPgf::explicit_pmf(pmf);
  } else {
    fail(ErrorCode::Parse, "config: unknown kind '" + kind + "'");
  }
  return cfg;
}

}  // namespace bulkq
