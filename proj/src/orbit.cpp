#include "holodyn/orbit.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "holodyn/errors.hpp"
#include "holodyn/parallel.hpp"

namespace holodyn {

const char* to_string(Fate::Kind k) {
  switch (k) {
    case Fate::Kind::ConvergedTo: return "ConvergedTo";
    case Fate::Kind::CycleOfPeriod: return "CycleOfPeriod";
    case Fate::Kind::Escaped: return "Escaped";
    case Fate::Kind::HitPole: return "HitPole";
    case Fate::Kind::Undecided: return "Undecided";
  }
  return "?";
}

const char* to_string(NewtonResult::Status s) {
  switch (s) {
    case NewtonResult::Status::Converged: return "Converged";
    case NewtonResult::Status::DerivativeVanishes: return "DerivativeVanishes";
    case NewtonResult::Status::EvaluationFailed: return "EvaluationFailed";
    case NewtonResult::Status::Stalled: return "Stalled";
    case NewtonResult::Status::MaxSteps: return "MaxSteps";
  }
  return "?";
}

Complex cycle_representative(std::span<const Complex> members) {
  Complex best = members.front();
  for (Complex m : members) {
    const double a = std::abs(m.imag());
    const double b = std::abs(best.imag());
    if (a < b || (a == b && m.real() < best.real())) best = m;
  }
  return best;
}

OrbitRecord iterate(const ComplexMap& f, Complex seed, int max_iters, const OrbitParams& p) {
  OrbitRecord rec;
  rec.seed = seed;
  const std::size_t cap = static_cast<std::size_t>(std::max(1, max_iters));
  rec.points.reserve(std::min<std::size_t>(cap, 4096));
  rec.points.push_back(seed);

  const double radius = p.escape_radius;
  int escape_start = std::abs(seed) > radius ? 0 : -1;
  int settle = 0;
  std::vector<int> lag_run(static_cast<std::size_t>(std::max(2, p.cycle_scan_max + 1)), 0);

  auto& pts = rec.points;
  while (pts.size() < cap) {
    const int k = static_cast<int>(pts.size()) - 1;
    const Complex z = pts[k];
    const EvalOutcome out = f.value(z);
    if (out.kind == EvalOutcome::Kind::PoleHit) {
      rec.fate.kind = Fate::Kind::HitPole;
      rec.fate.step = k;
      return rec;
    }
    if (out.kind == EvalOutcome::Kind::Overflow) {
      rec.fate.kind = Fate::Kind::Escaped;
      rec.fate.step = escape_start >= 0 ? escape_start : static_cast<int>(pts.size());
      return rec;
    }
    const Complex w = out.value;
    pts.push_back(w);
    const int k1 = k + 1;

    if (std::abs(w) > radius) {
      if (escape_start < 0) escape_start = k1;
      if (k1 - escape_start >= p.grace_window) {
        rec.fate.kind = Fate::Kind::Escaped;
        rec.fate.step = escape_start;
        return rec;
      }
      settle = 0;
      std::fill(lag_run.begin(), lag_run.end(), 0);
      continue;
    }
    escape_start = -1;

    if (std::abs(w - z) < p.conv_tol) {
      if (++settle >= p.settle_window) {
        rec.fate.kind = Fate::Kind::ConvergedTo;
        rec.fate.point = w;
        return rec;
      }
    } else {
      settle = 0;
    }

    const int max_lag = std::min(p.cycle_scan_max, k1);
    for (int lag = 2; lag <= max_lag; ++lag) {
      if (std::abs(w - pts[k1 - lag]) >= p.cycle_tol) {
        lag_run[lag] = 0;
        continue;
      }
      if (++lag_run[lag] < p.settle_window) continue;
      // A genuine cycle of period lag must not already close at a divisor.
      bool minimal = true;
      for (int d = 1; d < lag && minimal; ++d)
        if (lag % d == 0 && std::abs(w - pts[k1 - d]) < p.cycle_tol) minimal = false;
      if (!minimal) continue;
      rec.fate.kind = Fate::Kind::CycleOfPeriod;
      rec.fate.period = lag;
      rec.fate.point = cycle_representative(std::span<const Complex>(pts).subspan(k1 - lag + 1, lag));
      return rec;
    }
  }
  if (escape_start >= 0) {
    rec.fate.kind = Fate::Kind::Escaped;
    rec.fate.step = escape_start;
  }
  return rec;
}

ChainEval chain_eval(const ComplexMap& f, Complex z, int n) {
  ChainEval r;
  Complex d(1.0);
  Complex w = z;
  for (int i = 0; i < n; ++i) {
    const EvalOutcome v = f.value(w);
    if (!v.ok()) {
      r.value = v;
      r.failed_step = i;
      return r;
    }
    const EvalOutcome s = f.slope(w);
    if (!s.ok()) {
      r.value = s;
      r.failed_step = i;
      return r;
    }
    d *= s.value;
    w = v.value;
  }
  r.value = EvalOutcome::finite(w);
  r.slope = d;
  return r;
}

EvalOutcome ComposedMap::slope(Complex z) const {
  const ChainEval c = chain_eval(f_, z, n_);
  if (!c.value.ok()) return c.value;
  if (!is_finite(c.slope) || std::abs(c.slope) > kOverflowCap) return EvalOutcome::overflow();
  return EvalOutcome::finite(c.slope);
}

NewtonResult damped_newton(const std::function<Residual(Complex)>& F, Complex z0,
                           const NewtonParams& p) {
  using Status = NewtonResult::Status;
  // Residuals at the rounding floor are accepted when no step can improve them.
  constexpr double kFloorResidual = 1e-8;

  NewtonResult res;
  Complex z = z0;
  Residual r = F(z);
  res.z = z;
  if (!r.ok) {
    res.status = Status::EvaluationFailed;
    return res;
  }
  for (int step = 0;; ++step) {
    const double rn = std::abs(r.value);
    res.z = z;
    res.residual = rn;
    res.steps = step;
    if (rn == 0.0) {
      res.status = Status::Converged;
      return res;
    }
    if (r.slope == 0.0 || !is_finite(r.slope)) {
      res.status = Status::DerivativeVanishes;
      return res;
    }
    const Complex dz = r.value / r.slope;
    if (!is_finite(dz)) {
      res.status = Status::DerivativeVanishes;
      return res;
    }
    const double scale = std::max(1.0, std::abs(z));
    const bool tiny_step = std::abs(dz) <= p.step_tol * scale;
    if (rn <= p.residual_target && tiny_step) {
      res.status = Status::Converged;
      return res;
    }
    if (step >= p.max_steps) {
      res.status = Status::MaxSteps;
      return res;
    }
    double t = 1.0;
    bool improved = false;
    Complex zn;
    Residual next;
    for (int h = 0; h <= p.max_halvings; ++h, t *= 0.5) {
      zn = z - t * dz;
      next = F(zn);
      if (next.ok && is_finite(next.value) && std::abs(next.value) < rn) {
        improved = true;
        break;
      }
    }
    if (!improved) {
      res.status = (tiny_step && rn <= kFloorResidual) ? Status::Converged : Status::Stalled;
      return res;
    }
    z = zn;
    r = next;
  }
}

std::vector<Complex> lattice_seeds(const Box& box, int grid_n,
                                   std::optional<std::uint64_t> jitter_seed) {
  std::vector<Complex> seeds;
  seeds.reserve(static_cast<std::size_t>(grid_n) * static_cast<std::size_t>(grid_n));
  std::mt19937_64 rng(jitter_seed.value_or(0));
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const double cw = box.width() / grid_n;
  const double ch = box.height() / grid_n;
  for (int row = 0; row < grid_n; ++row) {
    for (int col = 0; col < grid_n; ++col) {
      Complex z = box.lattice_point(col, row, grid_n, grid_n);
      if (jitter_seed) {
        const double dx = u(rng);
        const double dy = u(rng);
        z += Complex(dx * cw, dy * ch);
      }
      seeds.push_back(z);
    }
  }
  return seeds;
}

std::vector<Complex> dedup_points(std::vector<Complex> pts, double tol) {
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Complex> kept;
  kept.reserve(pts.size());
  for (Complex p : pts) {
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (p.real() - it->real() > tol) break;
      if (std::abs(p - *it) < tol) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(p);
  }
  return kept;
}

PreimageSet preimages(const MeroFn& f, ExtendedComplex target, int depth, const Box& box,
                      int grid_n, const PreimageParams& params) {
  if (depth < 1) throw InvalidArgument("preimage depth must be >= 1");
  if (!box.nondegenerate()) throw InvalidArgument("preimage search box is degenerate");
  if (grid_n < 1) throw InvalidArgument("preimage grid must be >= 1");

  if (target.is_infinite()) {
    if (f.pole_free()) throw TargetExceptional("infinity is omitted by an entire function");
  } else if (auto om = omitted_value(f)) {
    if (std::abs(*om - target.value()) <= 1e-12 * std::max(1.0, std::abs(*om)))
      throw TargetExceptional("target is an omitted value of " + f.to_string());
  }

  const bool at_infinity = target.is_infinite();
  const Complex t = target.value();
  // For infinity: Newton on 1 / f^depth; a pole at the final application is an exact root.
  auto residual = [&](Complex z) -> Residual {
    if (at_infinity) {
      const ChainEval inner = chain_eval(f, z, depth - 1);
      if (!inner.value.ok()) return {};
      const Complex w = inner.value.value;
      const EvalOutcome v = f.eval(w);
      if (v.kind == EvalOutcome::Kind::PoleHit) return {true, 0.0, 1.0};
      if (!v.ok()) return {};
      const EvalOutcome s = f.slope(w);
      if (!s.ok()) return {true, 0.0, 1.0};
      const Complex g = 1.0 / v.value;
      return {true, g, -s.value * inner.slope * g * g};
    }
    const ChainEval c = chain_eval(f, z, depth);
    if (!c.value.ok() || !is_finite(c.slope)) return {};
    return {true, c.value.value - t, c.slope};
  };

  auto verified = [&](Complex p) {
    if (at_infinity) {
      const ChainEval inner = chain_eval(f, p, depth - 1);
      if (!inner.value.ok()) return false;
      const EvalOutcome v = f.eval(inner.value.value);
      return v.kind == EvalOutcome::Kind::PoleHit ||
             (v.ok() && std::abs(v.value) > 1.0 / kPoleTolerance);
    }
    const ChainEval c = chain_eval(f, p, depth);
    return c.value.ok() && std::abs(c.value.value - t) < params.residual_tol;
  };

  const std::vector<Complex> seeds = lattice_seeds(box, grid_n, params.jitter_seed);
  const std::size_t n = seeds.size();
  std::vector<std::optional<Complex>> found(n);
  std::vector<signed char> status(n, -1);
  std::vector<char> outside(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const NewtonResult r = damped_newton(residual, seeds[i], params.newton);
    if (!r.converged()) {
      status[i] = static_cast<signed char>(r.status);
      return;
    }
    if (!box.contains(r.z)) {
      outside[i] = 1;
      return;
    }
    if (verified(r.z)) found[i] = r.z;
    else status[i] = static_cast<signed char>(NewtonResult::Status::Stalled);
  });

  PreimageSet out;
  out.target = target;
  out.depth = depth;
  std::vector<Complex> pts;
  for (std::size_t i = 0; i < n; ++i) {
    if (found[i]) pts.push_back(*found[i]);
    if (status[i] >= 0) ++out.failures[static_cast<std::size_t>(status[i])];
    out.outside_box += outside[i];
  }
  out.points = dedup_points(std::move(pts), params.dedup_tol);
  return out;
}

}  // namespace holodyn
