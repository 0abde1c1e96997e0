#pragma once

// M/M/s reference: Erlang-C mean queue length under rho = 1 - gamma/s^alpha
// and the log-log slope of Lq against s.

#include <vector>

namespace bulkq {

struct MmsPoint {
  int s = 1;
  double rho = 0.0;
  double mean_queue = 0.0;
};

/// Erlang-C delay probability for s servers at offered load a = rho s.
double erlang_c(int s, double rho);

/// Lq = C(s, rho s) rho/(1 - rho), unit mean service time.
double erlang_c_mean_queue(int s, double rho);

/// Same quantity by direct summation of a^k/k!; only for s <= 170.
double erlang_c_mean_queue_direct(int s, double rho);

std::vector<MmsPoint> mms_curve(double alpha, double gamma, const std::vector<int>& s_grid);

/// Least-squares slope of ln Lq against ln s.
double slope_fit(double alpha, double gamma, const std::vector<int>& s_grid);

/// Least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bulkq
