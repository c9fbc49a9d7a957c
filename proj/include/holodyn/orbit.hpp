// Forward orbits with fate detection, composed maps, damped Newton and
// preimage search.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "holodyn/core.hpp"
#include "holodyn/fnkit.hpp"

namespace holodyn {

struct OrbitParams {
  double escape_radius = 1e8;
  double conv_tol = 1e-10;
  int settle_window = 5;
  double cycle_tol = 1e-8;
  int cycle_scan_max = 64;
  /// Steps an orbit must stay beyond escape_radius before it counts as escaped.
  int grace_window = 10;
};

struct Fate {
  enum class Kind { ConvergedTo, CycleOfPeriod, Escaped, HitPole, Undecided };

  Kind kind = Kind::Undecided;
  Complex point{};  // limit (ConvergedTo) or representative (CycleOfPeriod)
  int period = 0;   // CycleOfPeriod only
  int step = -1;    // Escaped / HitPole: index into points (see iterate)
};

const char* to_string(Fate::Kind k);

struct OrbitRecord {
  Complex seed{};
  /// points[k] = f^k(seed); points[0] is the seed.
  std::vector<Complex> points;
  Fate fate;
};

/// Iterates f from seed, storing at most max_iters points (seed included).
///
/// Decision order per step: HitPole(k) when evaluating f at points[k] hits a
/// pole; Escaped(k) when points[k] is the first point beyond escape_radius
/// and the following grace_window points (or the rest of the budget) stay
/// beyond it. Overflow counts as escape; if no stored point exceeds the
/// radius, step is points.size(). ConvergedTo when settle_window successive
/// differences are below conv_tol; CycleOfPeriod(p) when the lag-p distance
/// stays below cycle_tol for settle_window consecutive steps, 2 <= p <=
/// cycle_scan_max. Otherwise Undecided.
OrbitRecord iterate(const ComplexMap& f, Complex seed, int max_iters,
                    const OrbitParams& params = {});

/// Cycle representative: the member with the smallest |Im|, ties by smallest Re.
Complex cycle_representative(std::span<const Complex> members);

/// f^n(z) together with (f^n)'(z) by the chain rule.
struct ChainEval {
  EvalOutcome value;
  Complex slope{};
  int failed_step = -1;  // index of the application that failed, -1 if none
};
ChainEval chain_eval(const ComplexMap& f, Complex z, int n);

/// f^n as a map. Holds a reference: f must outlive the composed map.
class ComposedMap final : public ComplexMap {
 public:
  ComposedMap(const ComplexMap& f, int n) : f_(f), n_(n) {}
  EvalOutcome value(Complex z) const override { return chain_eval(f_, z, n_).value; }
  EvalOutcome slope(Complex z) const override;
  int order() const { return n_; }

 private:
  const ComplexMap& f_;
  int n_;
};

// ------------------------------------------------------------ damped Newton

struct NewtonParams {
  int max_steps = 200;
  double residual_target = 1e-12;
  int max_halvings = 40;
  /// A root is accepted only when the next Newton step is below this
  /// fraction of max(1, |z|).
  double step_tol = 1e-8;
};

struct Residual {
  bool ok = false;  // false: the residual could not be evaluated here
  Complex value{};
  Complex slope{};
};

struct NewtonResult {
  enum class Status { Converged, DerivativeVanishes, EvaluationFailed, Stalled, MaxSteps };
  Status status = Status::MaxSteps;
  Complex z{};
  double residual = 0.0;
  int steps = 0;
  bool converged() const { return status == Status::Converged; }
};

const char* to_string(NewtonResult::Status s);

/// Newton's method on F with step halving whenever the full step does not
/// decrease |F|.
NewtonResult damped_newton(const std::function<Residual(Complex)>& F, Complex z0,
                           const NewtonParams& params = {});

// ------------------------------------------------------------ preimages

/// Centers of a grid_n x grid_n lattice over box, row-major from the top
/// row. With a jitter seed each point moves uniformly within its cell.
std::vector<Complex> lattice_seeds(const Box& box, int grid_n,
                                   std::optional<std::uint64_t> jitter_seed = std::nullopt);

struct PreimageParams {
  NewtonParams newton;
  std::optional<std::uint64_t> jitter_seed;
  double dedup_tol = 1e-6;
  /// Finite targets: required |f^depth(p) - target|.
  double residual_tol = 1e-8;
};

struct PreimageSet {
  ExtendedComplex target;
  int depth = 0;
  std::vector<Complex> points;  // sorted by (Re, Im)
  /// Per-seed failures by NewtonResult::Status, index = static_cast<int>(status).
  std::array<int, 5> failures{};
  int outside_box = 0;
};

/// Solutions of f^depth(z) = target found by damped Newton from the centers
/// of a grid_n x grid_n lattice over box. For target = infinity the points
/// are those where f^{depth-1} lands on a pole of f. Completeness is only
/// relative to the lattice.
/// Throws TargetExceptional when the target is an omitted value of f (or
/// infinity for an entire f), InvalidArgument on bad depth/box/grid.
PreimageSet preimages(const MeroFn& f, ExtendedComplex target, int depth, const Box& box,
                      int grid_n, const PreimageParams& params = {});

/// Sorts by (Re, Im) and drops points within tol of an already kept point.
std::vector<Complex> dedup_points(std::vector<Complex> pts, double tol);

}  // namespace holodyn
