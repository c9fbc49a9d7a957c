#include "holodyn/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "holodyn/errors.hpp"
#include "holodyn/parallel.hpp"

namespace holodyn {

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Superattracting: return "Superattracting";
    case Stability::Attracting: return "Attracting";
    case Stability::RationallyIndifferent: return "RationallyIndifferent";
    case Stability::IrrationallyIndifferent: return "IrrationallyIndifferent";
    case Stability::Repelling: return "Repelling";
  }
  return "?";
}

int rational_denominator(double x, double tol, int q_max) {
  const double target = std::abs(x);
  double y = target;
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(y);
    if (a > 1e12) break;
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > q_max) break;
    if (std::abs(target - static_cast<double>(h2) / static_cast<double>(k2)) < tol)
      return static_cast<int>(k2);
    const double frac = y - a;
    if (frac < 1e-15) break;
    y = 1.0 / frac;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return 0;
}

StabilityClass classify_multiplier(Complex lambda, const MultiplierParams& p) {
  const double a = std::abs(lambda);
  if (a < p.zero_band) return {Stability::Superattracting, 0};
  if (std::abs(a - 1.0) < p.indiff_band) {
    double theta = std::arg(lambda) / kTwoPi;  // in [-0.5, 0.5]
    if (theta <= -0.5) theta += 1.0;
    if (int q = rational_denominator(theta, p.rational_tol, p.q_max))
      return {Stability::RationallyIndifferent, q};
    return {Stability::IrrationallyIndifferent, 0};
  }
  return {a < 1.0 ? Stability::Attracting : Stability::Repelling, 0};
}

namespace {

Residual periodic_residual(const ComplexMap& f, Complex z, int n) {
  const ChainEval c = chain_eval(f, z, n);
  if (!c.value.ok() || !is_finite(c.slope)) return {};
  return {true, c.value.value - z, c.slope - 1.0};
}

}  // namespace

std::optional<PeriodicPoint> make_periodic_point(const ComplexMap& f, Complex z, int n,
                                                 const PeriodicParams& params) {
  std::vector<Complex> members{z};
  for (int k = 1; k < n; ++k) {
    const EvalOutcome v = f.value(members.back());
    if (!v.ok()) return std::nullopt;
    members.push_back(v.value);
  }
  // Proper divisors: the point must not close up early.
  for (int m = 1; m < n; ++m) {
    if (n % m != 0) continue;
    if (std::abs(members[static_cast<std::size_t>(m)] - z) < params.minimality_margin)
      return std::nullopt;
  }
  Complex rep = cycle_representative(members);
  // The representative came from forward iteration; polish it in place.
  if (rep != z) {
    auto F = [&](Complex w) { return periodic_residual(f, w, n); };
    NewtonParams polish = params.newton;
    polish.max_steps = 20;
    const NewtonResult r = damped_newton(F, rep, polish);
    if (r.converged() && std::abs(r.z - rep) < 1e-6 * std::max(1.0, std::abs(rep))) rep = r.z;
  }
  const ChainEval c = chain_eval(f, rep, n);
  if (!c.value.ok()) return std::nullopt;
  const double residual = std::abs(c.value.value - rep);
  if (!(residual < params.conv_tol)) return std::nullopt;
  // With (f^n)' = 1 to working precision, f^n(z) - z vanishes by cancellation
  // alone and the root cannot be resolved.
  if (!(std::abs(c.slope - 1.0) >= params.min_conditioning)) return std::nullopt;

  PeriodicPoint pt;
  pt.location = rep;
  pt.minimal_period = n;
  pt.multiplier = c.slope;
  pt.stability = classify_multiplier(c.slope, params.multiplier);
  pt.residual = residual;
  pt.cycle.push_back(rep);
  // Forward images pick up error |(f^n)'| times faster than the cycle
  // contracts under Newton, so each member is re-polished on its own.
  auto F = [&](Complex w) { return periodic_residual(f, w, n); };
  NewtonParams polish = params.newton;
  polish.max_steps = 8;
  for (int k = 1; k < n; ++k) {
    const EvalOutcome v = f.value(pt.cycle.back());
    if (!v.ok()) return std::nullopt;
    Complex m = v.value;
    const NewtonResult r = damped_newton(F, m, polish);
    if (r.converged() && std::abs(r.z - m) < 1e-6 * std::max(1.0, std::abs(m))) m = r.z;
    pt.cycle.push_back(m);
  }
  return pt;
}

PeriodicSearch find_periodic(const ComplexMap& f, int n, const Box& box, int grid_n,
                             const PeriodicParams& params) {
  if (n < 1) throw InvalidArgument("period must be >= 1");
  if (!box.nondegenerate()) throw InvalidArgument("search box is degenerate");
  if (grid_n < 1) throw InvalidArgument("grid must be >= 1");

  enum Reject : signed char { kNone = -1, kOutside = 10, kResidual = 11, kMinimal = 12 };
  const std::vector<Complex> seeds = lattice_seeds(box, grid_n, params.jitter_seed);
  const std::size_t count = seeds.size();
  std::vector<std::optional<PeriodicPoint>> found(count);
  std::vector<signed char> reason(count, kNone);

  auto F = [&](Complex z) { return periodic_residual(f, z, n); };
  parallel_for(count, [&](std::size_t i) {
    const NewtonResult r = damped_newton(F, seeds[i], params.newton);
    if (!r.converged()) {
      reason[i] = static_cast<signed char>(r.status);
      return;
    }
    if (!box.contains(r.z)) {
      reason[i] = kOutside;
      return;
    }
    // Separate the two ways make_periodic_point can refuse a root.
    std::vector<Complex> orbit{r.z};
    bool early = false;
    for (int m = 1; m < n && !early; ++m) {
      const EvalOutcome v = f.value(orbit.back());
      if (!v.ok()) break;
      orbit.push_back(v.value);
      if (n % m == 0 && std::abs(v.value - r.z) < params.minimality_margin) early = true;
    }
    if (early) {
      reason[i] = kMinimal;
      return;
    }
    found[i] = make_periodic_point(f, r.z, n, params);
    if (!found[i]) reason[i] = kResidual;
  });

  PeriodicSearch out;
  std::vector<PeriodicPoint> candidates;
  for (std::size_t i = 0; i < count; ++i) {
    if (found[i]) candidates.push_back(std::move(*found[i]));
    switch (reason[i]) {
      case kNone: break;
      case kOutside: ++out.outside_box; break;
      case kResidual: ++out.residual_rejected; break;
      case kMinimal: ++out.not_minimal; break;
      default: ++out.newton_failures[static_cast<std::size_t>(reason[i])]; break;
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    if (a.location.imag() != b.location.imag()) return a.location.imag() < b.location.imag();
    return a.residual < b.residual;
  });
  for (auto& c : candidates) {
    bool dup = false;
    for (const auto& kept : out.cycles) {
      for (Complex m : kept.cycle)
        if (std::abs(c.location - m) < params.dedup_tol * std::max(1.0, std::abs(m))) dup = true;
      if (dup) break;
    }
    if (!dup) out.cycles.push_back(std::move(c));
  }
  return out;
}

}  // namespace holodyn
