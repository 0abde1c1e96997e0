#pragma once

#include <cmath>
#include <complex>

namespace bulkq {

using cplx = std::complex<double>;

// log(1+u) without cancellation for small |u|.
inline cplx clog1p(cplx u) {
  const double x = u.real();
  const double y = u.imag();
  const double re = 0.5 * std::log1p(2.0 * x + x * x + y * y);
  const double im = std::atan2(y, 1.0 + x);
  return {re, im};
}

// exp(u)-1 without cancellation for small |u|.
inline cplx cexpm1(cplx u) {
  const double x = u.real();
  const double y = u.imag();
  const double sh = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * sh * sh;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

}  // namespace bulkq
