#include "holodyn/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace holodyn::poly {

using expr::Op;

std::optional<int> degree_bound(const expr::NodePtr& n) {
  switch (n->op) {
    case Op::Const: return 0;
    case Op::Var: return 1;
    case Op::Add:
    case Op::Sub: {
      auto a = degree_bound(n->lhs);
      auto b = degree_bound(n->rhs);
      if (!a || !b) return std::nullopt;
      return std::max(*a, *b);
    }
    case Op::Mul: {
      auto a = degree_bound(n->lhs);
      auto b = degree_bound(n->rhs);
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case Op::Div:
      if (!expr::is_z_free(n->rhs)) return std::nullopt;
      return degree_bound(n->lhs);
    case Op::Neg: return degree_bound(n->lhs);
    case Op::Pow: {
      auto a = degree_bound(n->lhs);
      if (!a) return std::nullopt;
      if (n->exponent < 0) return *a == 0 ? std::optional<int>(0) : std::nullopt;
      return *a * n->exponent;
    }
    default:
      if (expr::is_z_free(n)) return 0;
      return std::nullopt;
  }
}

std::vector<Complex> coefficients(const expr::NodePtr& n) {
  const int deg = degree_bound(n).value_or(0);
  const int count = deg + 1;
  std::vector<Complex> samples(count);
  for (int j = 0; j < count; ++j) {
    samples[j] = expr::evaluate(*n, std::polar(1.0, kTwoPi * j / count));
  }
  std::vector<Complex> c(count);
  double scale = 0.0;
  for (int k = 0; k < count; ++k) {
    Complex sum{};
    for (int j = 0; j < count; ++j) sum += samples[j] * std::polar(1.0, -kTwoPi * j * k / count);
    c[k] = sum / static_cast<double>(count);
    scale = std::max(scale, std::abs(c[k]));
  }
  // Snap sampling noise to zero relative to the largest coefficient.
  for (auto& ck : c) {
    if (std::abs(ck.real()) < 1e-14 * scale) ck.real(0.0);
    if (std::abs(ck.imag()) < 1e-14 * scale) ck.imag(0.0);
  }
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  return c;
}

Complex horner(std::span<const Complex> c, Complex z) {
  Complex acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

namespace {

// p(z) and p'(z) in one pass.
std::pair<Complex, Complex> horner2(std::span<const Complex> c, Complex z) {
  Complex p{}, dp{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

}  // namespace

std::vector<Complex> roots(std::span<const Complex> c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  const Complex lead = c.back();
  // Initial guesses on a circle whose radius is the geometric-mean root size.
  double radius = std::pow(std::abs(c.front() / lead), 1.0 / n);
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, kTwoPi * k / n + 0.4);

  for (int iter = 0; iter < 800; ++iter) {
    double max_step = 0.0;
    for (int i = 0; i < n; ++i) {
      auto [p, dp] = horner2(c, z[i]);
      if (p == 0.0) continue;
      Complex ratio = p / dp;
      Complex sum{};
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      Complex w = ratio / (1.0 - ratio * sum);
      if (!is_finite(w)) continue;
      z[i] -= w;
      max_step = std::max(max_step, std::abs(w) / std::max(1.0, std::abs(z[i])));
    }
    if (max_step < 1e-15) break;
  }
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return z;
}

std::vector<Cluster> cluster(std::span<const Complex> pts, double tol) {
  std::vector<int> parent(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i] - pts[j]) <= tol * std::max(1.0, std::abs(pts[i])))
        parent[find(static_cast<int>(j))] = find(static_cast<int>(i));

  std::vector<Cluster> out;
  std::vector<int> slot(pts.size(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.push_back({pts[i], 1});
    } else {
      Cluster& cl = out[slot[r]];
      cl.center += pts[i];
      ++cl.count;
    }
  }
  for (auto& cl : out) cl.center /= static_cast<double>(cl.count);
  return out;
}

Complex refine_multiple(std::span<const Complex> c, const Cluster& cl) {
  std::vector<Complex> d(c.begin(), c.end());
  for (int k = 1; k < cl.count && d.size() > 1; ++k) {
    for (std::size_t j = 1; j < d.size(); ++j) d[j - 1] = d[j] * static_cast<double>(j);
    d.pop_back();
  }
  Complex z = cl.center;
  for (int iter = 0; iter < 20; ++iter) {
    auto [p, dp] = horner2(d, z);
    if (p == 0.0 || dp == 0.0) break;
    const Complex step = p / dp;
    if (!is_finite(step)) break;
    z -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
  }
  if (std::abs(z - cl.center) > 1e-4 * std::max(1.0, std::abs(cl.center))) return cl.center;
  return z;
}

std::vector<Cluster> distinct_roots(std::span<const Complex> c, double tol) {
  const auto raw = roots(c);
  auto out = cluster(raw, tol);
  for (auto& cl : out) cl.center = refine_multiple(c, cl);
  return out;
}

}  // namespace holodyn::poly
