#pragma once

#include <complex>

#include "holodyn/core.hpp"
#include "holodyn/expr.hpp"

namespace holodyn::detail {

inline Complex ipow(Complex base, int n) {
  if (n < 0) return Complex(1.0) / ipow(base, -n);
  Complex result(1.0);
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

inline Complex apply_function(expr::Op fn, Complex w) {
  switch (fn) {
    case expr::Op::Exp: return std::exp(w);
    case expr::Op::Sin: return std::sin(w);
    case expr::Op::Cos: return std::cos(w);
    case expr::Op::Tan: return std::tan(w);
    default: return w;
  }
}

/// Distance from w to the nearest pole pi/2 + k*pi of tan.
inline double tan_pole_distance(Complex w) {
  const double k = std::round((w.real() - kPi / 2) / kPi);
  return std::abs(w - Complex(kPi / 2 + k * kPi, 0.0));
}

}  // namespace holodyn::detail
