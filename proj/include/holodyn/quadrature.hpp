// Adaptive Simpson quadrature of complex-valued integrands on real intervals.
#pragma once

#include <functional>

#include "holodyn/core.hpp"

namespace holodyn {

struct QuadratureResult {
  Complex value{};
  bool ok = true;  // false when the integrand failed or the depth limit was hit
  int evaluations = 0;
};

/// Integral of f over [a, b] to absolute tolerance tol. f returns false when
/// it cannot be evaluated at a point.
QuadratureResult adaptive_simpson(const std::function<bool(double, Complex&)>& f, double a,
                                  double b, double tol, int max_depth = 40);

/// Integral of f along the straight segment from z0 to z1.
QuadratureResult segment_integral(const std::function<bool(Complex, Complex&)>& f, Complex z0,
                                  Complex z1, double tol, int max_depth = 40);

}  // namespace holodyn
