// Newton and relaxed Newton iterators z - h g/g', the singular-orbit
// convergence test, the continuous Newton flow and basin measures.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "holodyn/core.hpp"
#include "holodyn/fnkit.hpp"
#include "holodyn/image.hpp"
#include "holodyn/orbit.hpp"
#include "holodyn/periodic.hpp"

namespace holodyn {

/// The function g whose zeros are sought, with two derivatives.
class NewtonTarget {
 public:
  virtual ~NewtonTarget() = default;
  virtual EvalOutcome value(Complex z) const = 0;
  virtual EvalOutcome d1(Complex z) const = 0;
  virtual EvalOutcome d2(Complex z) const = 0;
  virtual std::string describe() const = 0;
  /// A polynomial whose zeros are exactly the zeros of g'' (when known).
  virtual std::optional<expr::NodePtr> second_derivative_polynomial() const = 0;
  /// Coefficients of g when g is a polynomial.
  virtual std::optional<std::vector<Complex>> polynomial() const = 0;
};

class SymbolicTarget final : public NewtonTarget {
 public:
  explicit SymbolicTarget(MeroFn g);
  EvalOutcome value(Complex z) const override { return g_.eval(z); }
  EvalOutcome d1(Complex z) const override { return g_.derivative().eval(z); }
  EvalOutcome d2(Complex z) const override { return g_.derivative().derivative().eval(z); }
  std::string describe() const override { return g_.to_string(); }
  std::optional<expr::NodePtr> second_derivative_polynomial() const override;
  std::optional<std::vector<Complex>> polynomial() const override;
  const MeroFn& g() const { return g_; }

 private:
  MeroFn g_;
};

/// g(z) = integral from 0 to z of p(t) e^{q(t)} dt + c, by adaptive Simpson
/// along straight segments. warm() precomputes g on an anchor lattice; later
/// evaluations integrate only from the nearest anchor.
class IntegralTarget final : public NewtonTarget {
 public:
  IntegralTarget(MeroFn p, MeroFn q, Complex c);
  EvalOutcome value(Complex z) const override;
  EvalOutcome d1(Complex z) const override { return integrand_.eval(z); }
  EvalOutcome d2(Complex z) const override { return integrand_.derivative().eval(z); }
  std::string describe() const override;
  std::optional<expr::NodePtr> second_derivative_polynomial() const override;
  std::optional<std::vector<Complex>> polynomial() const override { return std::nullopt; }

  /// Sequential warm-up of the anchor cache: one anchor per cell of a
  /// rows x rows lattice over box. Not thread-safe; call before sharing.
  void warm(const Box& box, int rows);
  const MeroFn& integrand() const { return integrand_; }

 private:
  EvalOutcome integrate(Complex from, Complex from_value, Complex to) const;

  MeroFn p_, q_, integrand_;
  Complex c_;
  Box anchor_box_;
  int anchor_rows_ = 0;
  std::vector<Complex> anchor_values_;
};

/// z - h g(z)/g'(z) for any target.
class RelaxedNewtonMap final : public ComplexMap {
 public:
  RelaxedNewtonMap(std::shared_ptr<const NewtonTarget> g, Complex h) : g_(std::move(g)), h_(h) {}
  EvalOutcome value(Complex z) const override;
  EvalOutcome slope(Complex z) const override;

 private:
  std::shared_ptr<const NewtonTarget> g_;
  Complex h_;
};

struct RootInfo {
  Complex location{};
  int multiplicity = 1;
  /// f_h'(root) as the mean of f_h' over a small circle (the point itself
  /// may be a removable singularity).
  Complex multiplier{};
  /// round(h / (1 - multiplier)); equals multiplicity for a correct root.
  int multiplicity_from_multiplier = 0;
};

struct NewtonSetup {
  std::shared_ptr<const NewtonTarget> target;
  Complex h{1.0};
  std::optional<MeroFn> f_h;  // symbolic targets only
  std::shared_ptr<const ComplexMap> iterator;
  std::vector<RootInfo> roots;
  std::string warning;  // e.g. no roots found in the box
};

struct RootSearchParams {
  Box box = Box::square(4.0);
  int grid = 40;
  double cluster_tol = 0.02;
};

/// Builds f_h = z - h g/g' and locates the roots of g: all roots for
/// polynomials, otherwise Newton on g/g' from a lattice over the box.
/// Throws InvalidArgument unless |h - 1| < 1 or h = 1, or if g is constant.
NewtonSetup make_relaxed(const MeroFn& g, Complex h, const RootSearchParams& params = {});
NewtonSetup make_relaxed(std::shared_ptr<const NewtonTarget> g, Complex h,
                         const RootSearchParams& params = {});

/// Mean of the map's derivative over a circle of the given radius.
Complex circle_mean_slope(const ComplexMap& f, Complex center, double radius, int samples = 16);

struct SingularOrbit {
  Complex point{};
  Fate fate;
  int root_index = -1;  // root the orbit converged to, -1 if none
};

struct SmaleReport {
  enum class Verdict { Guaranteed, Obstructed };
  std::vector<SingularOrbit> singular;
  Verdict verdict = Verdict::Guaranteed;
  std::vector<PeriodicPoint> obstructing_cycles;
};

const char* to_string(SmaleReport::Verdict v);

/// Iterates Newton's map (h = 1) from each zero of g'' that is not a zero of
/// g'. Guaranteed when every such orbit converges to a root of g.
SmaleReport smale_test(const NewtonSetup& setup, const Box& box = Box::square(4.0),
                       int max_iters = 500);

struct FlowParams {
  double t_max = 100.0;
  double dt = 1e-2;
  double dt_min = 1e-8;
  double flow_tol = 1e-8;
  double assign_tol = 1e-3;
  double local_tol = 1e-9;  // step-doubling error per step, relative to max(1, |z|)
};

struct FlowOutcome {
  enum class Kind { Root, Diverged, StepUnderflow };
  Kind kind = Kind::Diverged;
  int root_index = -1;
  Complex terminal{};
  double t = 0.0;
  int steps = 0;
};

const char* to_string(FlowOutcome::Kind k);

/// Integrates dz/dt = -g/g' with RK4 and step-doubling error control.
FlowOutcome flow_basin(const NewtonSetup& setup, Complex seed, const FlowParams& params = {});

struct BasinReport {
  Complex h{};
  Box box;
  int width = 0;
  int height = 0;
  int max_iters = 0;
  std::vector<Complex> roots;
  std::vector<double> iteration_fractions;
  double iteration_nonconvergent = 0.0;
  bool flow_computed = false;
  std::vector<double> flow_fractions;
  double flow_nonconvergent = 0.0;
  std::vector<PeriodicPoint> off_root_cycles;
  std::vector<int> labels;  // per cell: root index under iteration, -1 otherwise
};

struct BasinParams {
  bool include_flow = false;
  FlowParams flow;
  double assign_tol = 1e-3;
};

/// Grid fractions for each setup (all must share g).
std::vector<BasinReport> basin_measures(const std::vector<NewtonSetup>& setups, const Box& box,
                                        int width, int height, int max_iters,
                                        const BasinParams& params = {});

/// Per-root gray levels: non-convergent 0, root k spread over 64..255.
GrayImage render_basins(const BasinReport& report);

}  // namespace holodyn
