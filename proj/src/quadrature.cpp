#include "holodyn/quadrature.hpp"

#include <cmath>

namespace holodyn {

namespace {

struct Simpson {
  const std::function<bool(double, Complex&)>& f;
  QuadratureResult& out;
  int max_depth;

  bool eval(double t, Complex& v) {
    ++out.evaluations;
    return f(t, v) && is_finite(v);
  }

  Complex recurse(double a, double b, Complex fa, Complex fm, Complex fb, Complex whole,
                  double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    Complex flm, frm;
    if (!eval(lm, flm) || !eval(rm, frm)) {
      out.ok = false;
      return whole;
    }
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex diff = left + right - whole;
    if (depth >= max_depth) {
      out.ok = false;
      return left + right + diff / 15.0;
    }
    if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<bool(double, Complex&)>& f, double a,
                                  double b, double tol, int max_depth) {
  QuadratureResult out;
  if (a == b) return out;
  Simpson s{f, out, max_depth};
  Complex fa, fm, fb;
  const double m = 0.5 * (a + b);
  if (!s.eval(a, fa) || !s.eval(m, fm) || !s.eval(b, fb)) {
    out.ok = false;
    return out;
  }
  const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  out.value = s.recurse(a, b, fa, fm, fb, whole, tol, 0);
  return out;
}

QuadratureResult segment_integral(const std::function<bool(Complex, Complex&)>& f, Complex z0,
                                  Complex z1, double tol, int max_depth) {
  const Complex dz = z1 - z0;
  auto along = [&](double t, Complex& v) {
    Complex w;
    if (!f(z0 + t * dz, w)) return false;
    v = w * dz;
    return true;
  };
  return adaptive_simpson(along, 0.0, 1.0, tol, max_depth);
}

}  // namespace holodyn
