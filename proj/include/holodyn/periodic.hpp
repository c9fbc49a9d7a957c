// Periodic points: lattice search with damped Newton, minimality check,
// multipliers and their stability class.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "holodyn/core.hpp"
#include "holodyn/fnkit.hpp"
#include "holodyn/orbit.hpp"

namespace holodyn {

enum class Stability {
  Superattracting,
  Attracting,
  RationallyIndifferent,
  IrrationallyIndifferent,
  Repelling
};

const char* to_string(Stability s);

struct StabilityClass {
  Stability kind = Stability::Repelling;
  int q = 0;  // denominator estimate, RationallyIndifferent only
  bool operator==(const StabilityClass&) const = default;
};

struct MultiplierParams {
  double zero_band = 1e-9;
  double indiff_band = 1e-6;
  double rational_tol = 1e-9;
  int q_max = 64;
};

StabilityClass classify_multiplier(Complex lambda, const MultiplierParams& params = {});

/// Smallest q <= q_max with |x - p/q| < tol for some integer p, via the
/// convergents of x. 0 when there is none.
int rational_denominator(double x, double tol, int q_max);

struct PeriodicPoint {
  Complex location{};  // cycle representative
  int minimal_period = 0;
  Complex multiplier{};
  StabilityClass stability;
  double residual = 0.0;        // |f^n(location) - location|
  std::vector<Complex> cycle;   // location, f(location), ...
};

struct PeriodicParams {
  NewtonParams newton;
  std::optional<std::uint64_t> jitter_seed;
  double conv_tol = 1e-10;
  double minimality_margin = 1e-4;
  double dedup_tol = 1e-6;
  /// Roots with |(f^n)' - 1| below this are rejected as unresolvable.
  double min_conditioning = 1e-9;
  MultiplierParams multiplier;
};

struct PeriodicSearch {
  std::vector<PeriodicPoint> cycles;  // sorted by (Re, Im) of the representative
  std::array<int, 5> newton_failures{};  // indexed by NewtonResult::Status
  int outside_box = 0;
  int residual_rejected = 0;
  int not_minimal = 0;
};

/// Cycles of minimal period n with a member found from a grid_n x grid_n
/// lattice over box. One representative per cycle.
PeriodicSearch find_periodic(const ComplexMap& f, int n, const Box& box, int grid_n,
                             const PeriodicParams& params = {});

/// Builds the PeriodicPoint for a point believed to have period n, or
/// nullopt when it fails the residual or minimality checks.
std::optional<PeriodicPoint> make_periodic_point(const ComplexMap& f, Complex z, int n,
                                                 const PeriodicParams& params = {});

}  // namespace holodyn
