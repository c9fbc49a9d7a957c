#include <doctest.h>

#include <algorithm>

#include "holodyn/errors.hpp"
#include "holodyn/periodic.hpp"
#include "../support/oracles.hpp"

using namespace holodyn;

namespace {

const PeriodicPoint* find_member(const PeriodicSearch& s, Complex z, double tol) {
  for (const auto& p : s.cycles)
    for (Complex m : p.cycle)
      if (std::abs(m - z) < tol) return &p;
  return nullptr;
}

}  // namespace

TEST_CASE("classify_multiplier") {
  CHECK(classify_multiplier(0.0).kind == Stability::Superattracting);
  CHECK(classify_multiplier(1e-10).kind == Stability::Superattracting);
  CHECK(classify_multiplier(5.0 / 6.0).kind == Stability::Attracting);
  CHECK(classify_multiplier(1.5).kind == Stability::Repelling);
  CHECK(classify_multiplier(1.0 + 1e-5).kind == Stability::Repelling);

  const StabilityClass one = classify_multiplier(1.0);
  CHECK(one.kind == Stability::RationallyIndifferent);
  CHECK(one.q == 1);
  const StabilityClass third = classify_multiplier(std::polar(1.0, kTwoPi / 3));
  CHECK(third.kind == Stability::RationallyIndifferent);
  CHECK(third.q == 3);
  const double golden = (std::sqrt(5.0) - 1) / 2;
  CHECK(classify_multiplier(std::polar(1.0, kTwoPi * golden)).kind == Stability::IrrationallyIndifferent);
}

TEST_CASE("rational_denominator") {
  CHECK(rational_denominator(0.25, 1e-9, 64) == 4);
  CHECK(rational_denominator(-2.0 / 7.0, 1e-9, 64) == 7);
  CHECK(rational_denominator(0.0, 1e-9, 64) == 1);
  CHECK(rational_denominator((std::sqrt(5.0) - 1) / 2, 1e-9, 64) == 0);
}

TEST_CASE("find_periodic: Newton 2-cycle of z^3 - z + 1/sqrt2") {
  const MeroFn N = parse("z - (z^3 - z + 0.7071067811865476)/(3*z^2 - 1)");
  const PeriodicSearch s = find_periodic(N, 2, Box::square(2.0), 60);
  const PeriodicPoint* p = find_member(s, 0.0, 1e-9);
  REQUIRE(p != nullptr);
  CHECK(find_member(s, 0.7071067811865476, 1e-9) == p);
  CHECK(p->minimal_period == 2);
  CHECK(std::abs(p->multiplier) < 1e-9);
  CHECK(p->stability.kind == Stability::Superattracting);
  CHECK(p->residual < 1e-10);
}

TEST_CASE("find_periodic: no fixed points of e^z + z") {
  const PeriodicSearch s = find_periodic(parse("exp(z) + z"), 1, Box::square(50.0), 120);
  CHECK(s.cycles.empty());
}

TEST_CASE("find_periodic: fixed points of e^z against a Newton oracle") {
  // Oracle: plain Newton on e^z - z from dense seeds, then merge.
  std::vector<Complex> oracle_pts;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      const Complex seed(-3 + 6 * (i + 0.5) / 30, -3 + 6 * (j + 0.5) / 30);
      const Complex z = oracle::newton([](Complex w) { return std::exp(w) - w; },
                                       [](Complex w) { return std::exp(w) - 1.0; }, seed);
      if (std::abs(std::exp(z) - z) < 1e-12 && std::abs(z.real()) <= 3 && std::abs(z.imag()) <= 3 &&
          std::none_of(oracle_pts.begin(), oracle_pts.end(), [&](Complex o) { return std::abs(o - z) < 1e-6; }))
        oracle_pts.push_back(z);
    }
  REQUIRE(oracle_pts.size() == 2);  // 0.3181 +- 1.3372i

  const PeriodicSearch s = find_periodic(parse("exp(z)"), 1, Box::square(3.0), 40);
  REQUIRE(s.cycles.size() == oracle_pts.size());
  for (Complex o : oracle_pts) {
    const PeriodicPoint* p = find_member(s, o, 1e-9);
    REQUIRE(p != nullptr);
    CHECK(std::abs(std::abs(p->multiplier) - std::abs(o)) < 1e-9);
    CHECK(p->stability.kind == Stability::Repelling);
  }
  CHECK(std::abs(s.cycles[0].location - Complex(0.3181315052, -1.3372357014)) < 1e-8);
}

TEST_CASE("find_periodic: cycle invariants for e^z, n = 2 and 3") {
  const MeroFn f = parse("exp(z)");
  for (int n : {2, 3}) {
    CAPTURE(n);
    const PeriodicSearch s = find_periodic(f, n, Box::square(8.0), 80);
    REQUIRE(s.cycles.size() >= 5);
    for (const auto& p : s.cycles) {
      CHECK(p.minimal_period == n);
      CHECK(p.residual < 1e-10);
      CHECK(p.stability.kind == Stability::Repelling);
      CHECK(std::abs(p.multiplier) > 1.0 + 1e-6);
      // Divisor exclusion.
      for (int m = 1; m < n; ++m)
        if (n % m == 0) CHECK(std::abs(chain_eval(f, p.location, m).value.value - p.location) >= 1e-4);
      // The multiplier is the same from every member of the cycle.
      REQUIRE(p.cycle.size() == static_cast<std::size_t>(n));
      for (Complex m : p.cycle) {
        Complex prod = 1.0, z = m;
        for (int k = 0; k < n; ++k) {
          prod *= std::exp(z);
          z = std::exp(z);
        }
        CHECK(std::abs(prod - p.multiplier) <= 1e-8 * std::abs(p.multiplier));
      }
      // Representative rule: smallest |Im|, ties by smallest Re.
      for (Complex m : p.cycle) CHECK(std::abs(p.location.imag()) <= std::abs(m.imag()) + 1e-12);
    }
  }
}

TEST_CASE("find_periodic: roots of unity are superattracting for the Newton map of z^3 - 1") {
  const MeroFn N = parse("z - (z^3 - 1)/(3*z^2)");
  const PeriodicSearch s = find_periodic(N, 1, Box::square(2.0), 30);
  for (int k = 0; k < 3; ++k) {
    const PeriodicPoint* p = find_member(s, std::polar(1.0, kTwoPi * k / 3), 1e-9);
    REQUIRE(p != nullptr);
    CHECK(p->stability.kind == Stability::Superattracting);
  }
}

TEST_CASE("find_periodic: argument checks and determinism") {
  const MeroFn f = parse("z^2 - 1");
  CHECK_THROWS_AS(find_periodic(f, 0, Box::square(2.0), 10), InvalidArgument);
  CHECK_THROWS_AS(find_periodic(f, 1, Box{0, 0, 0, 1}, 10), InvalidArgument);
  const auto a = find_periodic(parse("exp(z)"), 2, Box::square(5.0), 40);
  const auto b = find_periodic(parse("exp(z)"), 2, Box::square(5.0), 40);
  REQUIRE(a.cycles.size() == b.cycles.size());
  for (std::size_t i = 0; i < a.cycles.size(); ++i) CHECK(a.cycles[i].location == b.cycles[i].location);
}

TEST_CASE("make_periodic_point rejects non-minimal points") {
  const MeroFn f = parse("z^2");
  CHECK_FALSE(make_periodic_point(f, 1.0, 2).has_value());
  const auto p = make_periodic_point(f, 1.0, 1);
  REQUIRE(p.has_value());
  CHECK(p->stability.kind == Stability::Repelling);
}
