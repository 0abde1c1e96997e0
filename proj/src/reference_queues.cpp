#include "bulkq/reference_queues.hpp"

#include <cmath>

#include "bulkq/error.hpp"

namespace bulkq {

namespace {

void check(int s, double rho) {
  require(s >= 1, ErrorCode::InvalidArgument, "erlang_c: s must be >= 1");
  require(rho > 0.0 && rho < 1.0, rho >= 1.0 ? ErrorCode::Unstable : ErrorCode::InvalidArgument,
          "erlang_c: rho must lie in (0, 1)");
}

}  // namespace

double erlang_c(int s, double rho) {
  check(s, rho);
  const double a = rho * s;
  const double log_a = std::log(a);
  // Erlang-B recurrence B_k = a B_{k-1} / (k + a B_{k-1}) carried in logs.
  double log_b = 0.0;
  for (int k = 1; k <= s; ++k) log_b = log_a + log_b - std::log(k + std::exp(log_a + log_b));
  const double b = std::exp(log_b);
  return b / (1.0 - rho * (1.0 - b));
}

double erlang_c_mean_queue(int s, double rho) { return erlang_c(s, rho) * rho / (1.0 - rho); }

double erlang_c_mean_queue_direct(int s, double rho) {
  check(s, rho);
  require(s <= 170, ErrorCode::Domain, "erlang_c_mean_queue_direct: s must be <= 170");
  const double a = rho * s;
  double head = 0.0;
  double term = 1.0;  // a^k / k!
  for (int k = 0; k < s; ++k) {
    head += term;
    term *= a / (k + 1);
  }
  const double tail = term / (1.0 - rho);
  return tail / (head + tail) * rho / (1.0 - rho);
}

std::vector<MmsPoint> mms_curve(double alpha, double gamma, const std::vector<int>& s_grid) {
  std::vector<MmsPoint> out;
  out.reserve(s_grid.size());
  for (int s : s_grid) {
    const double rho = 1.0 - gamma / std::pow(static_cast<double>(s), alpha);
    require(rho > 0.0 && rho < 1.0, ErrorCode::Unstable,
            "mms_curve: rho = 1 - gamma/s^alpha outside (0, 1) at s = " + std::to_string(s));
    out.push_back({s, rho, erlang_c_mean_queue(s, rho)});
  }
  return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 3, ErrorCode::InvalidArgument, "slope fit: need at least 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0.0, ErrorCode::InvalidArgument, "slope fit: grid has no spread");
  return sxy / sxx;
}

double slope_fit(double alpha, double gamma, const std::vector<int>& s_grid) {
  require(s_grid.size() >= 3, ErrorCode::InvalidArgument, "slope_fit: need at least 3 grid points");
  const auto pts = mms_curve(alpha, gamma, s_grid);
  std::vector<double> x, y;
  for (const auto& p : pts) {
    x.push_back(std::log(static_cast<double>(p.s)));
    y.push_back(std::log(p.mean_queue));
  }
  return least_squares_slope(x, y);
}

}  // namespace bulkq
