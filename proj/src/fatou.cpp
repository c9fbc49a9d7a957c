#include "holodyn/fatou.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "holodyn/errors.hpp"

namespace holodyn {

const char* to_string(RateCheck::Sequence s) {
  return s == RateCheck::Sequence::LogAbs ? "log_abs" : "loglog_abs";
}

const char* to_string(FateKind k) {
  switch (k) {
    case FateKind::AttractingBasin: return "AttractingBasin";
    case FateKind::LeauCandidate: return "LeauCandidate";
    case FateKind::RotationCandidate: return "RotationCandidate";
    case FateKind::BakerCandidate: return "BakerCandidate";
    case FateKind::WanderingCandidate: return "WanderingCandidate";
    case FateKind::JuliaOrUndecided: return "JuliaOrUndecided";
  }
  return "?";
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

// f^L with first and second derivatives by the chain rule.
struct Jet {
  bool ok = false;
  Complex value, d1, d2;
};

Jet jet(const MeroFn& f, Complex z, int L) {
  const MeroFn& df = f.derivative();
  const MeroFn& ddf = df.derivative();
  Jet j{true, z, 1.0, 0.0};
  for (int k = 0; k < L; ++k) {
    const EvalOutcome a = f.eval(j.value);
    const EvalOutcome b = df.eval(j.value);
    const EvalOutcome c = ddf.eval(j.value);
    if (!a.ok() || !b.ok() || !c.ok()) return {};
    j.d2 = c.value * j.d1 * j.d1 + b.value * j.d2;
    j.d1 = b.value * j.d1;
    j.value = a.value;
  }
  return j;
}

bool closes_early(const MeroFn& f, Complex z, int L, double tol) {
  Complex w = z;
  for (int m = 1; m < L; ++m) {
    const EvalOutcome v = f.eval(w);
    if (!v.ok()) return false;
    w = v.value;
    if (L % m == 0 && std::abs(w - z) < tol) return true;
  }
  return false;
}

std::vector<Complex> cycle_of(const MeroFn& f, Complex z, int L) {
  std::vector<Complex> c{z};
  for (int k = 1; k < L; ++k) {
    const EvalOutcome v = f.eval(c.back());
    if (!v.ok()) break;
    c.push_back(v.value);
  }
  return c;
}

// Parabolic point near the end of a slowly converging orbit. Schroeder's
// variant of Newton keeps quadratic convergence at the multiple root.
std::optional<FateLabel> leau_test(const MeroFn& f, const OrbitRecord& rec,
                                   const FatouParams& params) {
  const auto& pts = rec.points;
  const std::size_t n = pts.size();
  if (n < 64) return std::nullopt;
  const Complex last = pts.back();
  for (int L = 1; L <= params.max_period; ++L) {
    Complex z = last;
    bool ok = true;
    for (int it = 0; it < 80; ++it) {
      const Jet j = jet(f, z, L);
      if (!j.ok) {
        ok = false;
        break;
      }
      const Complex F = j.value - z;
      const Complex dF = j.d1 - 1.0;
      const Complex denom = dF * dF - F * j.d2;
      if (F == 0.0 || denom == 0.0) break;
      const Complex step = F * dF / denom;
      if (!is_finite(step)) {
        ok = false;
        break;
      }
      z -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (!ok || std::abs(z - last) > 0.1) continue;
    const Jet j = jet(f, z, L);
    if (!j.ok || std::abs(j.value - z) > 1e-8) continue;
    if (closes_early(f, z, L, 1e-6)) continue;
    const StabilityClass cls = classify_multiplier(j.d1, params.multiplier);
    if (cls.kind != Stability::RationallyIndifferent) continue;

    // Decay of the distance to the cycle over the second half of the orbit.
    const auto cycle = cycle_of(f, z, L);
    std::vector<double> lx, ly;
    for (std::size_t k = n / 2; k < n; ++k) {
      double d = std::numeric_limits<double>::infinity();
      for (Complex c : cycle) d = std::min(d, std::abs(pts[k] - c));
      if (!(d > 0.0)) continue;
      lx.push_back(std::log(static_cast<double>(k)));
      ly.push_back(std::log(d));
    }
    if (lx.size() < 16) continue;
    const LineFit fit = fit_line(lx, ly);
    const double q = cls.q;
    if (fit.slope < -1.5 / q || fit.slope > -0.5 / q) continue;

    FateLabel label;
    label.kind = FateKind::LeauCandidate;
    label.point = cycle_representative(cycle);
    label.period = L;
    label.multiplier = j.d1;
    label.q = cls.q;
    label.decay_slope = fit.slope;
    return label;
  }
  return std::nullopt;
}

// Rotation about an irrationally indifferent periodic point near the orbit.
std::optional<FateLabel> rotation_test(const MeroFn& f, const OrbitRecord& rec,
                                       const FatouParams& params) {
  const auto& pts = rec.points;
  const std::size_t n = pts.size();
  if (n < 64) return std::nullopt;
  Complex centroid{};
  for (std::size_t k = n / 2; k < n; ++k) centroid += pts[k];
  centroid /= static_cast<double>(n - n / 2);
  for (int L = 1; L <= std::min(4, params.max_period); ++L) {
    auto F = [&](Complex w) -> Residual {
      const ChainEval c = chain_eval(f, w, L);
      if (!c.value.ok()) return {};
      return {true, c.value.value - w, c.slope - 1.0};
    };
    const NewtonResult r = damped_newton(F, centroid);
    if (!r.converged() || closes_early(f, r.z, L, 1e-6)) continue;
    const Complex c = r.z;
    const ChainEval ce = chain_eval(f, c, L);
    const StabilityClass cls = classify_multiplier(ce.slope, params.multiplier);
    if (cls.kind != Stability::IrrationallyIndifferent) continue;

    std::vector<double> inc;
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = n / 2; k + L < n; k += L) {
      const Complex a = pts[k] - c;
      const Complex b = pts[k + L] - c;
      min_dist = std::min(min_dist, std::abs(a));
      if (a == 0.0) break;
      inc.push_back(std::arg(b / a));
    }
    if (inc.size() < 16 || min_dist < 1e-6) continue;
    const bool same_sign = std::all_of(inc.begin(), inc.end(), [](double d) { return d > 0; }) ||
                           std::all_of(inc.begin(), inc.end(), [](double d) { return d < 0; });
    if (!same_sign) continue;
    const double mean = std::accumulate(inc.begin(), inc.end(), 0.0) / static_cast<double>(inc.size());
    double var = 0.0;
    for (double d : inc) var += (d - mean) * (d - mean);
    const double spread = std::sqrt(var / static_cast<double>(inc.size())) / std::abs(mean);
    if (spread > 0.5 || std::abs(mean - std::arg(ce.slope)) > 0.05) continue;

    FateLabel label;
    label.kind = FateKind::RotationCandidate;
    label.point = c;
    label.period = L;
    label.multiplier = ce.slope;
    label.mean_rotation = mean;
    label.rotation_spread = spread;
    label.note = "Siegel-like evidence only";
    return label;
  }
  return std::nullopt;
}

FateLabel attracting_or_indifferent(const MeroFn& f, const OrbitRecord& rec, Complex point,
                                    int period, const FatouParams& params) {
  FateLabel label;
  const ChainEval c = chain_eval(f, point, period);
  if (!c.value.ok()) {
    label.note = "limit cycle could not be evaluated";
    return label;
  }
  const StabilityClass cls = classify_multiplier(c.slope, params.multiplier);
  if (cls.kind == Stability::Superattracting || cls.kind == Stability::Attracting) {
    label.kind = FateKind::AttractingBasin;
    label.point = point;
    label.period = period;
    label.multiplier = c.slope;
    return label;
  }
  if (cls.kind == Stability::RationallyIndifferent) {
    if (auto leau = leau_test(f, rec, params)) return *leau;
  }
  label.point = point;
  label.period = period;
  label.multiplier = c.slope;
  label.note = std::string("orbit settled on a ") + to_string(cls.kind) + " cycle";
  return label;
}

bool class_is_entire(const MeroFn& f) {
  try {
    return f.fn_class() == FnClass::E;
  } catch (const ClassificationAmbiguous&) {
    return false;
  }
}

bool class_is_rational(const MeroFn& f) {
  try {
    return f.fn_class() == FnClass::Rational;
  } catch (const ClassificationAmbiguous&) {
    return false;
  }
}

}  // namespace

RateCheck escape_rate_check(const OrbitRecord& record, bool hint, double resid_tol) {
  if (record.fate.kind != Fate::Kind::Escaped)
    throw TooShortOrbit(std::string("orbit did not escape (fate ") + to_string(record.fate.kind) + ")");
  const double e = std::exp(1.0);
  std::vector<double> x, y;
  for (std::size_t k = 0; k < record.points.size(); ++k) {
    const double a = std::abs(record.points[k]);
    if (!(a > e)) continue;
    x.push_back(static_cast<double>(k));
    y.push_back(hint ? std::log(a) : std::log(std::log(a)));
  }
  if (x.size() < 20)
    throw TooShortOrbit("only " + std::to_string(x.size()) + " orbit points beyond e (need 20)");

  RateCheck rc;
  rc.sequence = hint ? RateCheck::Sequence::LogAbs : RateCheck::Sequence::LogLogAbs;
  const LineFit fit = fit_line(x, y);
  rc.fitted_slope = fit.slope;
  rc.intercept = fit.intercept;
  rc.points_used = static_cast<int>(x.size());
  rc.max_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i)
    rc.max_residual = std::max(rc.max_residual, y[i] - (fit.intercept + fit.slope * x[i]));
  rc.pass = std::isfinite(fit.slope) && rc.max_residual <= resid_tol;

  double A = 1.0;
  for (std::size_t k = 0; k + 1 < record.points.size(); ++k) {
    const double a = std::abs(record.points[k]);
    const double b = std::abs(record.points[k + 1]);
    if (!(a > e) || !(b > e)) continue;
    const double r = std::log(b) / std::log(a);
    A = std::max({A, r, 1.0 / r});
  }
  rc.growth_exponent = A;
  return rc;
}

std::optional<std::pair<int, int>> escape_period(const OrbitRecord& record, int max_period) {
  const auto& pts = record.points;
  const std::size_t n = pts.size();
  if (n < 64) {
    if (record.fate.kind == Fate::Kind::Escaped) return std::pair{1, 0};
    return std::nullopt;
  }
  for (int p = 1; p <= max_period; ++p) {
    for (int r = 0; r < p; ++r) {
      std::vector<double> s;
      for (std::size_t k = n / 2; k < n; ++k)
        if (static_cast<int>(k % p) == r) s.push_back(std::abs(pts[k]));
      if (s.size() < 16) continue;
      constexpr int kBlocks = 4;
      const std::size_t len = s.size() / kBlocks;
      double prev = -1.0;
      bool increasing = true;
      for (int b = 0; b < kBlocks && increasing; ++b) {
        const auto first = s.begin() + static_cast<std::ptrdiff_t>(b * len);
        const double m = *std::min_element(first, first + static_cast<std::ptrdiff_t>(len));
        if (!(m > prev)) increasing = false;
        prev = m;
      }
      if (increasing && s.back() > 1.5 * s.front() && s.back() > 10.0) return std::pair{p, r};
    }
  }
  return std::nullopt;
}

OrbitRecord escaping_record(const MeroFn& f, const OrbitRecord& record, int period, int residue,
                            const OrbitParams& params) {
  if (period == 1 && record.fate.kind == Fate::Kind::Escaped) return record;
  const auto& pts = record.points;
  double peak = 0.0;
  for (std::size_t k = static_cast<std::size_t>(residue); k < pts.size(); k += period)
    peak = std::max(peak, std::abs(pts[k]));
  OrbitParams tail = params;
  tail.escape_radius = std::min(params.escape_radius, 0.5 * peak);
  const int steps = static_cast<int>(pts.size()) / period + 1;
  if (period == 1) return iterate(f, pts[static_cast<std::size_t>(residue)], steps, tail);
  const ComposedMap fp(f, period);
  return iterate(fp, pts[static_cast<std::size_t>(residue)], steps, tail);
}

FateLabel classify_seed(const MeroFn& f, Complex seed, const FatouParams& params) {
  const OrbitRecord rec = iterate(f, seed, params.budget, params.orbit);
  auto finish = [&](FateLabel label) {
    label.orbit_fate = rec.fate.kind;
    label.orbit_length = static_cast<int>(rec.points.size());
    return label;
  };

  switch (rec.fate.kind) {
    case Fate::Kind::HitPole: {
      FateLabel label;
      label.note = "orbit hit a pole";
      return finish(label);
    }
    case Fate::Kind::ConvergedTo:
      return finish(attracting_or_indifferent(f, rec, rec.fate.point, 1, params));
    case Fate::Kind::CycleOfPeriod: {
      Complex rep = rec.fate.point;
      if (auto pp = make_periodic_point(f, rep, rec.fate.period)) rep = pp->location;
      return finish(attracting_or_indifferent(f, rec, rep, rec.fate.period, params));
    }
    case Fate::Kind::Undecided:
      if (auto leau = leau_test(f, rec, params)) return finish(*leau);
      if (auto rot = rotation_test(f, rec, params)) return finish(*rot);
      break;
    case Fate::Kind::Escaped:
      break;
  }

  FateLabel label;
  const auto period = escape_period(rec, params.max_period);
  if (!period) {
    label.note = "bounded orbit without a detected limit";
    return finish(label);
  }
  if (class_is_rational(f)) {
    label.kind = FateKind::AttractingBasin;
    label.at_infinity = true;
    label.period = 1;
    label.note = "rational map: escape is attraction to infinity";
    return finish(label);
  }
  const auto [p, r] = *period;
  label.period = p;

  // Tail statistics along the second half of the orbit.
  const auto& pts = rec.points;
  const std::size_t n = pts.size();
  const std::size_t tail_begin = n / 2;
  const MeroFn& df = f.derivative();
  double log_sum = 0.0;
  int log_count = 0;
  std::vector<double> steps;
  Complex drift{};
  for (std::size_t k = tail_begin; k + 1 < n; ++k) {
    const EvalOutcome d = df.eval(pts[k]);
    if (d.ok() && d.value != 0.0) {
      log_sum += std::log(std::abs(d.value));
      ++log_count;
    } else if (d.ok()) {
      log_sum += std::log(std::numeric_limits<double>::min());
      ++log_count;
    }
    steps.push_back(std::abs(pts[k + 1] - pts[k]));
    drift += pts[k + 1] - pts[k];
  }
  label.mean_log_derivative = log_count ? log_sum / log_count : 0.0;
  label.median_step = median(steps);
  label.drift = steps.empty() ? Complex{} : drift / static_cast<double>(steps.size());

  // Contraction along the orbit while it hops between well separated targets.
  if (log_count > 0 && label.mean_log_derivative < std::log(0.5) &&
      label.median_step > params.drift_sep) {
    label.kind = FateKind::WanderingCandidate;
    return finish(label);
  }

  const OrbitRecord escaped = escaping_record(f, rec, p, r, params.orbit);
  try {
    label.rate = escape_rate_check(escaped, class_is_entire(f), params.rate_resid_tol);
  } catch (const TooShortOrbit& e) {
    label.note = e.what();
    return finish(label);
  }
  if (!label.rate->pass) {
    label.note = "escape rate check failed";
    return finish(label);
  }

  const double rho = params.probe_radius * std::max(1.0, std::abs(seed));
  for (int k = 0; k < params.probe_count; ++k) {
    const Complex probe = seed + std::polar(rho, kTwoPi * k / params.probe_count);
    const OrbitRecord pr = iterate(f, probe, params.budget, params.orbit);
    const auto pp = escape_period(pr, params.max_period);
    if (pp && pp->first == p) ++label.probes_agreeing;
  }
  if (label.probes_agreeing == params.probe_count) {
    label.kind = FateKind::BakerCandidate;
  } else {
    label.note = "escape is not period-locked at the probe points";
  }
  return finish(label);
}

}  // namespace holodyn
