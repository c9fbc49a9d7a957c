#include "holodyn/newton.hpp"

#include <algorithm>
#include <cmath>

#include "holodyn/errors.hpp"
#include "holodyn/parallel.hpp"
#include "holodyn/polynomial.hpp"
#include "holodyn/quadrature.hpp"

namespace holodyn {

const char* to_string(SmaleReport::Verdict v) {
  return v == SmaleReport::Verdict::Guaranteed ? "GUARANTEED" : "OBSTRUCTED";
}

const char* to_string(FlowOutcome::Kind k) {
  switch (k) {
    case FlowOutcome::Kind::Root: return "Root";
    case FlowOutcome::Kind::Diverged: return "Diverged";
    case FlowOutcome::Kind::StepUnderflow: return "StepUnderflow";
  }
  return "?";
}

// ------------------------------------------------------------ targets

SymbolicTarget::SymbolicTarget(MeroFn g) : g_(std::move(g)) {}

std::optional<expr::NodePtr> SymbolicTarget::second_derivative_polynomial() const {
  if (!poly::degree_bound(g_.ast())) return std::nullopt;
  return g_.derivative().derivative().ast();
}

std::optional<std::vector<Complex>> SymbolicTarget::polynomial() const {
  if (!poly::degree_bound(g_.ast())) return std::nullopt;
  return poly::coefficients(g_.ast());
}

IntegralTarget::IntegralTarget(MeroFn p, MeroFn q, Complex c)
    : p_(std::move(p)),
      q_(std::move(q)),
      integrand_(expr::mul(p_.ast(), expr::apply(expr::Op::Exp, q_.ast()))),
      c_(c) {}

std::string IntegralTarget::describe() const {
  std::string s = "integral_0^z (" + p_.to_string() + ")*exp(" + q_.to_string() + ") dt";
  if (c_ != 0.0) s += " + " + expr::serialize(expr::constant(c_));
  return s;
}

std::optional<expr::NodePtr> IntegralTarget::second_derivative_polynomial() const {
  // g'' = (p' + p q') e^q, and e^q has no zeros.
  auto n = expr::add(p_.derivative().ast(), expr::mul(p_.ast(), q_.derivative().ast()));
  if (!poly::degree_bound(n)) return std::nullopt;
  return n;
}

EvalOutcome IntegralTarget::integrate(Complex from, Complex from_value, Complex to) const {
  if (from == to) return EvalOutcome::finite(from_value);
  auto f = [&](Complex z, Complex& out) {
    const EvalOutcome v = integrand_.eval(z);
    if (!v.ok()) return false;
    out = v.value;
    return true;
  };
  Complex fa, fb;
  if (!f(from, fa) || !f(to, fb)) return EvalOutcome::overflow();
  const double scale = std::max({1.0, std::abs(fa), std::abs(fb)}) * std::abs(to - from);
  const QuadratureResult r = segment_integral(f, from, to, 1e-14 * scale);
  if (!r.ok) return EvalOutcome::overflow();
  const Complex v = from_value + r.value;
  if (!is_finite(v) || std::abs(v) > kOverflowCap) return EvalOutcome::overflow();
  return EvalOutcome::finite(v);
}

EvalOutcome IntegralTarget::value(Complex z) const {
  if (anchor_rows_ > 0 && anchor_box_.contains(z)) {
    const int n = anchor_rows_;
    int col = static_cast<int>(std::floor((z.real() - anchor_box_.re_min) / anchor_box_.width() * n));
    int row = static_cast<int>(std::floor((anchor_box_.im_max - z.imag()) / anchor_box_.height() * n));
    col = std::clamp(col, 0, n - 1);
    row = std::clamp(row, 0, n - 1);
    const Complex a = anchor_box_.lattice_point(col, row, n, n);
    return integrate(a, anchor_values_[static_cast<std::size_t>(row) * n + col], z);
  }
  return integrate(0.0, c_, z);
}

void IntegralTarget::warm(const Box& box, int rows) {
  anchor_rows_ = 0;
  anchor_values_.assign(static_cast<std::size_t>(rows) * rows, Complex{});
  for (int row = 0; row < rows; ++row) {
    Complex prev = 0.0, prev_value = c_;
    for (int col = 0; col < rows; ++col) {
      const Complex a = box.lattice_point(col, row, rows, rows);
      const EvalOutcome v = integrate(prev, prev_value, a);
      if (!v.ok()) throw Error("QuadratureFailed", "cannot integrate to anchor point");
      anchor_values_[static_cast<std::size_t>(row) * rows + col] = v.value;
      prev = a;
      prev_value = v.value;
    }
  }
  anchor_box_ = box;
  anchor_rows_ = rows;
}

EvalOutcome RelaxedNewtonMap::value(Complex z) const {
  const EvalOutcome g = g_->value(z);
  if (!g.ok()) return g;
  if (g.value == 0.0) return EvalOutcome::finite(z);
  const EvalOutcome d = g_->d1(z);
  if (!d.ok()) return d;
  if (d.value == 0.0) return EvalOutcome::pole();
  const Complex w = z - h_ * g.value / d.value;
  if (!is_finite(w) || std::abs(w) > kOverflowCap) return EvalOutcome::pole();
  return EvalOutcome::finite(w);
}

EvalOutcome RelaxedNewtonMap::slope(Complex z) const {
  const EvalOutcome g = g_->value(z);
  const EvalOutcome d = g_->d1(z);
  const EvalOutcome dd = g_->d2(z);
  if (!g.ok()) return g;
  if (!d.ok()) return d;
  if (!dd.ok()) return dd;
  if (d.value == 0.0) return EvalOutcome::pole();
  const Complex s = 1.0 - h_ + h_ * g.value * dd.value / (d.value * d.value);
  if (!is_finite(s) || std::abs(s) > kOverflowCap) return EvalOutcome::pole();
  return EvalOutcome::finite(s);
}

// ------------------------------------------------------------ setup

Complex circle_mean_slope(const ComplexMap& f, Complex center, double radius, int samples) {
  Complex sum{};
  int used = 0;
  for (int k = 0; k < samples; ++k) {
    const EvalOutcome s = f.slope(center + std::polar(radius, kTwoPi * (k + 0.5) / samples));
    if (!s.ok()) continue;
    sum += s.value;
    ++used;
  }
  return used ? sum / static_cast<double>(used) : Complex(std::nan(""), std::nan(""));
}

namespace {

void check_relaxation(Complex h) {
  if (!(h == 1.0 || std::abs(h - 1.0) < 1.0))
    throw InvalidArgument("relaxation h must satisfy |h - 1| < 1 or h = 1");
}

// Newton on g/g', which has only simple zeros.
Residual quotient_residual(const NewtonTarget& g, Complex z) {
  const EvalOutcome a = g.value(z);
  const EvalOutcome b = g.d1(z);
  const EvalOutcome c = g.d2(z);
  if (!a.ok() || !b.ok() || !c.ok()) return {};
  if (a.value == 0.0) return {true, 0.0, 1.0};
  if (b.value == 0.0) return {};
  const Complex u = a.value / b.value;
  const Complex du = 1.0 - a.value * c.value / (b.value * b.value);
  return {true, u, du};
}

std::vector<RootInfo> locate_roots(const NewtonTarget& g, const ComplexMap& fh, Complex h,
                                   const RootSearchParams& params) {
  std::vector<std::pair<Complex, int>> found;  // location, multiplicity (0 = estimate later)
  if (auto coeffs = g.polynomial(); coeffs && coeffs->size() >= 2) {
    for (const auto& cl : poly::distinct_roots(*coeffs, params.cluster_tol)) {
      Complex z = cl.center;
      if (cl.count == 1) {
        auto F = [&](Complex w) { return quotient_residual(g, w); };
        NewtonParams np;
        np.max_steps = 20;
        const NewtonResult r = damped_newton(F, z, np);
        if (r.converged() && std::abs(r.z - z) < params.cluster_tol) z = r.z;
      }
      found.emplace_back(z, cl.count);
    }
  } else {
    const int n = params.grid;
    std::vector<std::optional<Complex>> hits(static_cast<std::size_t>(n) * n);
    auto F = [&](Complex w) { return quotient_residual(g, w); };
    parallel_for(hits.size(), [&](std::size_t i) {
      const Complex seed = params.box.lattice_point(static_cast<int>(i % n), static_cast<int>(i / n), n, n);
      const NewtonResult r = damped_newton(F, seed);
      if (!r.converged() || !params.box.contains(r.z)) return;
      const EvalOutcome v = g.value(r.z);
      if (v.ok() && std::abs(v.value) < 1e-8) hits[i] = r.z;
    });
    std::vector<Complex> pts;
    for (const auto& p : hits)
      if (p) pts.push_back(*p);
    for (Complex z : dedup_points(std::move(pts), 1e-6)) found.emplace_back(z, 0);
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                            : a.first.imag() < b.first.imag();
  });

  std::vector<RootInfo> roots;
  for (std::size_t i = 0; i < found.size(); ++i) {
    const Complex z = found[i].first;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < found.size(); ++j)
      if (j != i) nearest = std::min(nearest, std::abs(found[j].first - z));
    const double radius = std::min(1e-3 * std::max(1.0, std::abs(z)), 0.25 * nearest);
    RootInfo r;
    r.location = z;
    r.multiplier = circle_mean_slope(fh, z, radius);
    const Complex gap = 1.0 - r.multiplier;
    if (std::abs(gap) > 1e-12 && is_finite(gap))
      r.multiplicity_from_multiplier = static_cast<int>(std::lround((h / gap).real()));
    r.multiplicity = found[i].second > 0 ? found[i].second : std::max(1, r.multiplicity_from_multiplier);
    roots.push_back(r);
  }
  return roots;
}

}  // namespace

NewtonSetup make_relaxed(const MeroFn& g, Complex h, const RootSearchParams& params) {
  check_relaxation(h);
  if (expr::is_z_free(g.ast())) throw InvalidArgument("g must not be constant");
  NewtonSetup s;
  s.target = std::make_shared<SymbolicTarget>(g);
  s.h = h;
  auto step = expr::div(g.ast(), g.derivative().ast());
  if (h != 1.0) step = expr::mul(expr::constant(h), step);
  s.f_h = MeroFn(expr::sub(expr::variable(), step));
  s.iterator = std::make_shared<MeroFn>(*s.f_h);
  s.roots = locate_roots(*s.target, *s.iterator, h, params);
  if (s.roots.empty()) s.warning = "NoRootsFound: no zeros of g located in the search box";
  return s;
}

NewtonSetup make_relaxed(std::shared_ptr<const NewtonTarget> g, Complex h,
                         const RootSearchParams& params) {
  if (auto sym = std::dynamic_pointer_cast<const SymbolicTarget>(g)) return make_relaxed(sym->g(), h, params);
  check_relaxation(h);
  NewtonSetup s;
  s.target = std::move(g);
  s.h = h;
  s.iterator = std::make_shared<RelaxedNewtonMap>(s.target, h);
  s.roots = locate_roots(*s.target, *s.iterator, h, params);
  if (s.roots.empty()) s.warning = "NoRootsFound: no zeros of g located in the search box";
  return s;
}

// ------------------------------------------------------------ singular orbits

namespace {

int nearest_root(const std::vector<RootInfo>& roots, Complex z, double tol) {
  int best = -1;
  double bd = tol;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double d = std::abs(roots[i].location - z);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<Complex> second_derivative_zeros(const NewtonTarget& g, const Box& box) {
  if (auto p = g.second_derivative_polynomial()) {
    const auto coeffs = poly::coefficients(*p);
    if (coeffs.size() < 2) return {};
    std::vector<Complex> out;
    for (const auto& cl : poly::distinct_roots(coeffs, 1e-6)) out.push_back(cl.center);
    return out;
  }
  // No polynomial factor: Newton on g'' with a central-difference slope.
  auto F = [&](Complex z) -> Residual {
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    const EvalOutcome a = g.d2(z), b = g.d2(z + h), c = g.d2(z - h);
    if (!a.ok() || !b.ok() || !c.ok()) return {};
    return {true, a.value, (b.value - c.value) / (2.0 * h)};
  };
  constexpr int n = 40;
  std::vector<std::optional<Complex>> hits(n * n);
  parallel_for(hits.size(), [&](std::size_t i) {
    const NewtonResult r = damped_newton(F, box.lattice_point(static_cast<int>(i % n), static_cast<int>(i / n), n, n));
    if (r.converged() && box.contains(r.z)) hits[i] = r.z;
  });
  std::vector<Complex> pts;
  for (const auto& h : hits)
    if (h) pts.push_back(*h);
  return dedup_points(std::move(pts), 1e-6);
}

}  // namespace

SmaleReport smale_test(const NewtonSetup& setup, const Box& box, int max_iters) {
  SmaleReport rep;
  const NewtonTarget& g = *setup.target;
  std::vector<Complex> zeros = second_derivative_zeros(g, box);
  std::sort(zeros.begin(), zeros.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  std::shared_ptr<const ComplexMap> f1 = setup.iterator;
  if (setup.h != 1.0) {
    if (auto sym = std::dynamic_pointer_cast<const SymbolicTarget>(setup.target)) {
      f1 = make_relaxed(sym->g(), 1.0, RootSearchParams{box, 20, 0.02}).iterator;
    } else {
      f1 = std::make_shared<RelaxedNewtonMap>(setup.target, 1.0);
    }
  }

  for (Complex z : zeros) {
    const EvalOutcome d = g.d1(z);
    if (d.ok() && std::abs(d.value) < 1e-9) continue;  // also a zero of g'
    SingularOrbit so;
    so.point = z;
    const OrbitRecord rec = iterate(*f1, z, max_iters);
    so.fate = rec.fate;
    bool ok = false;
    if (rec.fate.kind == Fate::Kind::ConvergedTo) {
      const EvalOutcome v = g.value(rec.fate.point);
      so.root_index = nearest_root(setup.roots, rec.fate.point, 1e-6);
      ok = so.root_index >= 0 || (v.ok() && std::abs(v.value) < 1e-8);
    }
    if (!ok) {
      rep.verdict = SmaleReport::Verdict::Obstructed;
      if (rec.fate.kind == Fate::Kind::CycleOfPeriod) {
        if (auto pp = make_periodic_point(*f1, rec.fate.point, rec.fate.period)) {
          bool dup = false;
          for (const auto& c : rep.obstructing_cycles)
            for (Complex m : c.cycle) dup = dup || std::abs(m - pp->location) < 1e-6;
          if (!dup) rep.obstructing_cycles.push_back(*pp);
        }
      }
    }
    rep.singular.push_back(so);
  }
  return rep;
}

// ------------------------------------------------------------ flow

FlowOutcome flow_basin(const NewtonSetup& setup, Complex seed, const FlowParams& p) {
  const NewtonTarget& g = *setup.target;
  auto rhs = [&](Complex z, Complex& out) {
    const EvalOutcome a = g.value(z);
    const EvalOutcome b = g.d1(z);
    if (!a.ok() || !b.ok() || b.value == 0.0) return false;
    out = -a.value / b.value;
    return is_finite(out);
  };
  auto rk4 = [&](Complex z, double h, Complex& out) {
    Complex k1, k2, k3, k4;
    if (!rhs(z, k1) || !rhs(z + 0.5 * h * k1, k2) || !rhs(z + 0.5 * h * k2, k3) ||
        !rhs(z + h * k3, k4))
      return false;
    out = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return is_finite(out);
  };

  FlowOutcome out;
  Complex z = seed;
  double t = 0.0;
  double dt = p.dt;
  constexpr int kMaxSteps = 2000000;
  for (;;) {
    const EvalOutcome gv = g.value(z);
    if (gv.ok() && std::abs(gv.value) < p.flow_tol) {
      out.root_index = nearest_root(setup.roots, z, p.assign_tol);
      out.kind = out.root_index >= 0 ? FlowOutcome::Kind::Root : FlowOutcome::Kind::Diverged;
      break;
    }
    if (t >= p.t_max || out.steps >= kMaxSteps) {
      out.kind = FlowOutcome::Kind::Diverged;
      break;
    }
    const double h = std::min(dt, p.t_max - t);
    Complex full, half, twice;
    const bool ok = rk4(z, h, full) && rk4(z, 0.5 * h, half) && rk4(half, 0.5 * h, twice);
    if (!ok || std::abs(twice - full) > p.local_tol * std::max(1.0, std::abs(z))) {
      dt = 0.5 * h;
      if (dt < p.dt_min) {
        out.kind = FlowOutcome::Kind::StepUnderflow;
        break;
      }
      continue;
    }
    z = twice;
    t += h;
    ++out.steps;
    dt = std::min(p.dt, 2.0 * dt);
  }
  out.terminal = z;
  out.t = t;
  return out;
}

// ------------------------------------------------------------ basins

std::vector<BasinReport> basin_measures(const std::vector<NewtonSetup>& setups, const Box& box,
                                        int width, int height, int max_iters,
                                        const BasinParams& params) {
  if (setups.empty()) throw InvalidArgument("basin_measures needs at least one setup");
  if (!box.nondegenerate() || width < 1 || height < 1)
    throw InvalidArgument("basin grid is degenerate");
  const std::string g0 = setups.front().target->describe();
  for (const auto& s : setups)
    if (s.target->describe() != g0) throw InvalidArgument("basin_measures setups must share g");

  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<BasinReport> reports;
  for (const auto& s : setups) {
    BasinReport r;
    r.h = s.h;
    r.box = box;
    r.width = width;
    r.height = height;
    r.max_iters = max_iters;
    for (const auto& root : s.roots) r.roots.push_back(root.location);
    r.labels.assign(n, -1);
    std::vector<std::optional<std::pair<Complex, int>>> cycles(n);
    parallel_for(n, [&](std::size_t i) {
      const Complex z = box.lattice_point(static_cast<int>(i % width), static_cast<int>(i / width), width, height);
      const OrbitRecord rec = iterate(*s.iterator, z, max_iters);
      if (rec.fate.kind == Fate::Kind::ConvergedTo) {
        r.labels[i] = nearest_root(s.roots, rec.fate.point, params.assign_tol);
      } else if (rec.fate.kind == Fate::Kind::CycleOfPeriod) {
        cycles[i] = std::pair{rec.fate.point, rec.fate.period};
      }
    });
    std::vector<std::size_t> counts(s.roots.size(), 0);
    for (int l : r.labels)
      if (l >= 0) ++counts[static_cast<std::size_t>(l)];
    double total = 0.0;
    for (std::size_t c : counts) {
      r.iteration_fractions.push_back(static_cast<double>(c) / static_cast<double>(n));
      total += r.iteration_fractions.back();
    }
    r.iteration_nonconvergent = std::max(0.0, 1.0 - total);

    // Off-root attracting cycles, one per distinct representative.
    std::vector<std::pair<Complex, int>> reps;
    for (const auto& c : cycles)
      if (c) reps.push_back(*c);
    std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second < b.second;
      return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                              : a.first.imag() < b.first.imag();
    });
    for (const auto& [z, period] : reps) {
      bool dup = false;
      for (const auto& c : r.off_root_cycles)
        for (Complex m : c.cycle) dup = dup || std::abs(m - z) < 1e-6;
      if (dup) continue;
      if (auto pp = make_periodic_point(*s.iterator, z, period)) {
        if (pp->stability.kind == Stability::Attracting || pp->stability.kind == Stability::Superattracting)
          r.off_root_cycles.push_back(*pp);
      }
    }

    if (params.include_flow) {
      r.flow_computed = true;
      std::vector<int> flow_labels(n, -1);
      FlowParams fp = params.flow;
      fp.assign_tol = params.assign_tol;
      parallel_for(n, [&](std::size_t i) {
        const Complex z = box.lattice_point(static_cast<int>(i % width), static_cast<int>(i / width), width, height);
        const FlowOutcome o = flow_basin(s, z, fp);
        if (o.kind == FlowOutcome::Kind::Root) flow_labels[i] = o.root_index;
      });
      std::vector<std::size_t> fc(s.roots.size(), 0);
      for (int l : flow_labels)
        if (l >= 0) ++fc[static_cast<std::size_t>(l)];
      double ft = 0.0;
      for (std::size_t c : fc) {
        r.flow_fractions.push_back(static_cast<double>(c) / static_cast<double>(n));
        ft += r.flow_fractions.back();
      }
      r.flow_nonconvergent = std::max(0.0, 1.0 - ft);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

GrayImage render_basins(const BasinReport& report) {
  GrayImage img;
  img.width = report.width;
  img.height = report.height;
  img.pixels.resize(report.labels.size());
  const int k = static_cast<int>(report.roots.size());
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    const int l = report.labels[i];
    if (l < 0) {
      img.pixels[i] = 0;
    } else {
      img.pixels[i] = static_cast<std::uint8_t>(k > 1 ? 64 + (191 * l) / (k - 1) : 255);
    }
  }
  return img;
}

}  // namespace holodyn
