#pragma once

// Riemann zeta, erfc, Lerch's transcendent and the Gaussian-kernel integral
// family G0..G6, F used by the heavy-traffic expansions.
//
// Every G_k and F is available two ways: as a Riemann-zeta power series in b
// (valid on 0 < b < sqrt(2 pi), resp. 0 < beta < 2 sqrt(pi)) and as a direct
// quadrature of its defining integral over t in [0, 9]. The series is the
// authoritative value inside its disk of validity; quadrature outside it.

#include <cstddef>

namespace bulkq::special {

inline constexpr double kSqrtTwoPi = 2.50662827463100050242;  // series radius for G_k in b
inline constexpr double kTwoSqrtPi = 3.54490770181103205460;  // series radius for F, E M in beta
inline constexpr double kQuadratureUpper = 9.0;

struct SeriesResult {
  double value = 0.0;            // authoritative value
  double series = 0.0;           // zeta-series value (meaningful when in_domain)
  double quadrature = 0.0;       // direct quadrature, always computed
  std::size_t terms_used = 0;
  double truncation_bound = 0.0; // absolute bound on the dropped series tail
  bool in_domain = false;        // the series' validity condition held
};

/// Riemann zeta for real x != 1.
double zeta(double x);

double erfc(double x);

/// sum_{k>=0} z^k / (k+v)^s for 0 < z < 1, v = 1, s in {1/2, -1/2}.
double lerch_phi(double z, double s_param, double v = 1.0);

/// Integrals in b > 0 of the kernel e^{-b^2-t^2}/(1-e^{-b^2-t^2})^p, p in {1,2}:
///   G0 = int t^2/(b^2+t^2) K1     G1 = int K1      G2 = int b^2/(b^2+t^2) K1
///   G3 = int t^2/(b^2+t^2)^2 K1   G4 = int t^2/(b^2+t^2) K2
///   G5 = int K2                   G6 = int b^2/(b^2+t^2) K2
SeriesResult g0(double b);
SeriesResult g1(double b);
SeriesResult g2(double b);
SeriesResult g3(double b);
SeriesResult g4(double b);
SeriesResult g5(double b);
SeriesResult g6(double b);
SeriesResult g_family(int k, double b);

/// Quadrature of the defining integral truncated at t_max (G_k only).
double g_quadrature(int k, double b, double t_max = kQuadratureUpper);

// erfc sums: G2 = (pi/2) b sum erfc(b sqrt(k+1)), G6 = (pi/2) b sum (k+1) erfc(b sqrt(k+1)).
double g2_erfc_sum(double b);
double g6_erfc_sum(double b);

/// F(beta) = sum_{n>=1} (1/n) P(N(0,1) > beta sqrt(n)).
SeriesResult f_of_beta(double beta);
double f_erfc_sum(double beta);
/// (1/pi) int_0^inf b/(b^2+t^2) ln(1 - e^{-b^2-t^2}) dt, which equals -F(b sqrt 2).
double f_log_integral(double b);

/// sum_{r>=0} zeta(offset - r) (-1)^r b^{2r+shift} / (r! (2r+1)...(2r+m)) for
/// offset in {1/2, -1/2, -3/2}, m in 0..3 and 0 < b < sqrt(2 pi).
double zeta_weighted_series(double offset, double b, int shift, int m);

/// Expected all-time maximum of a Gaussian random walk with N(-beta, 1) steps,
/// via its zeta series; requires 0 < beta < 2 sqrt(pi).
double em_beta(double beta);

}  // namespace bulkq::special
