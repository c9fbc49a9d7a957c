// Fate of a seed's Fatou component: attracting basin, parabolic (Leau)
// petal, rotation domain evidence, Baker domain, wandering domain, or
// undecided. Also the least-squares escape-rate check.
#pragma once

#include <optional>
#include <string>

#include "holodyn/core.hpp"
#include "holodyn/fnkit.hpp"
#include "holodyn/orbit.hpp"
#include "holodyn/periodic.hpp"

namespace holodyn {

struct RateCheck {
  enum class Sequence { LogAbs, LogLogAbs };
  Sequence sequence = Sequence::LogAbs;
  double fitted_slope = 0.0;
  double intercept = 0.0;
  /// Largest amount by which the sequence rises above the fitted line.
  double max_residual = 0.0;
  bool pass = false;
  int points_used = 0;
  /// Smallest A with |z|^{1/A} <= |next| <= |z|^A along the fitted tail.
  double growth_exponent = 0.0;
};

const char* to_string(RateCheck::Sequence s);

/// Fits log|z_n| (hint true) or log log|z_n| against n over the points with
/// |z_n| > e. Pass iff the slope is finite and no point lies more than
/// resid_tol above the line. Throws TooShortOrbit unless the record escaped
/// and has at least 20 such points.
RateCheck escape_rate_check(const OrbitRecord& record, bool simply_connected_hint,
                            double resid_tol = 0.5);

enum class FateKind {
  AttractingBasin,
  LeauCandidate,
  RotationCandidate,
  BakerCandidate,
  WanderingCandidate,
  JuliaOrUndecided
};

const char* to_string(FateKind k);

struct FatouParams {
  int budget = 2000;
  double drift_sep = 1.0;
  double rate_resid_tol = 0.5;
  int max_period = 8;      // sub-orbit periods examined for escape and parabolic points
  int probe_count = 8;
  double probe_radius = 1e-2;  // relative to max(1, |seed|)
  MultiplierParams multiplier;
  OrbitParams orbit;
};

struct FateLabel {
  FateKind kind = FateKind::JuliaOrUndecided;
  Complex point{};  // cycle representative, parabolic point or rotation center
  bool at_infinity = false;
  int period = 0;
  Complex multiplier{};
  int q = 0;  // root-of-unity denominator (Leau)

  Fate::Kind orbit_fate = Fate::Kind::Undecided;
  int orbit_length = 0;
  std::optional<RateCheck> rate;
  double decay_slope = 0.0;         // Leau: log-log slope of the distance to the limit
  double mean_rotation = 0.0;       // Rotation: mean angle increment about the center
  double rotation_spread = 0.0;     // Rotation: std / |mean| of the increments
  double mean_log_derivative = 0.0; // escaping orbits: mean log|f'| per step over the tail
  double median_step = 0.0;         // escaping orbits: median |z_{n+1} - z_n| over the tail
  Complex drift{};                  // escaping orbits: mean z_{n+1} - z_n over the tail
  int probes_agreeing = 0;
  std::string note;
};

/// Decision order: attracting cycle, parabolic point, rotation about an
/// irrationally indifferent fixed point, then for escaping orbits the
/// wandering test before the Baker test (escape rate plus period-locked
/// probes). Anything else is JuliaOrUndecided.
FateLabel classify_seed(const MeroFn& f, Complex seed, const FatouParams& params = {});

/// Escape period of an orbit: the smallest p <= max_period for which some
/// residue class of the second half of the orbit grows steadily. Returns
/// (p, r) with r the residue class.
std::optional<std::pair<int, int>> escape_period(const OrbitRecord& record, int max_period = 8);

/// Re-runs the escaping residue class of an orbit under f^p with an escape
/// radius the orbit actually crosses, producing a record with fate Escaped.
OrbitRecord escaping_record(const MeroFn& f, const OrbitRecord& record, int period, int residue,
                            const OrbitParams& params = {});

}  // namespace holodyn
