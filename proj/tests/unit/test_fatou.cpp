#include <doctest.h>

#include <random>

#include "holodyn/errors.hpp"
#include "holodyn/fatou.hpp"
#include "holodyn/cli.hpp"
#include "../support/oracles.hpp"

using namespace holodyn;

TEST_CASE("classify_seed: attracting basin of 0.3 e^z") {
  const double q = oracle::bisect([](double x) { return 0.3 * std::exp(x) - x; }, 0.0, 1.0);
  const FateLabel l = classify_seed(parse("0.3*exp(z)"), 0.0);
  REQUIRE(l.kind == FateKind::AttractingBasin);
  CHECK(l.period == 1);
  CHECK(std::abs(l.point - q) < 1e-9);
  CHECK(std::abs(l.multiplier) < 1.0);
}

TEST_CASE("classify_seed: Baker domain of z + 1 + e^-z") {
  const MeroFn f = parse("z + 1 + exp(-z)");
  for (Complex seed : {Complex(1), Complex(2), Complex(5, 1)}) {
    CAPTURE(seed);
    const FateLabel l = classify_seed(f, seed);
    REQUIRE(l.kind == FateKind::BakerCandidate);
    CHECK(l.period == 1);
    REQUIRE(l.rate.has_value());
    CHECK(l.rate->pass);
    CHECK(l.rate->sequence == RateCheck::Sequence::LogAbs);
    CHECK(l.probes_agreeing == 8);
  }
}

TEST_CASE("classify_seed: Leau domain of e^z - 1") {
  const FateLabel l = classify_seed(parse("exp(z) - 1"), -0.5);
  REQUIRE(l.kind == FateKind::LeauCandidate);
  CHECK(std::abs(l.point) < 1e-2);
  CHECK(l.period == 1);
  CHECK(std::abs(l.multiplier - 1.0) < 1e-2);
  CHECK(l.q == 1);
  CHECK(l.decay_slope <= -0.5);
  CHECK(l.decay_slope >= -1.5);
}

TEST_CASE("classify_seed: wandering domains of z - 1 + e^-z + 2 pi i") {
  const MeroFn f = parse("z - 1 + exp(-z) + 6.283185307179586*i");
  const FateLabel l = classify_seed(f, 0.1);
  REQUIRE(l.kind == FateKind::WanderingCandidate);
  CHECK(std::abs(l.drift - Complex(0, kTwoPi)) < 1e-6);

  const OrbitRecord r = iterate(f, 0.1, 101);
  for (std::size_t n = 0; n < r.points.size(); ++n)
    CHECK(std::abs(r.points[n] - Complex(0, kTwoPi * static_cast<double>(n))) <= 2.0);
}

TEST_CASE("classify_seed: rotation about an irrationally indifferent fixed point") {
  const double golden = (std::sqrt(5.0) - 1) / 2;
  const Complex lam = std::polar(1.0, kTwoPi * golden);
  const MeroFn f = parse("(" + std::to_string(lam.real()) + " + " + std::to_string(lam.imag()) + "*i)*z");
  const FateLabel l = classify_seed(f, 0.3);
  CHECK(l.kind == FateKind::RotationCandidate);
  CHECK(std::abs(l.point) < 1e-6);
}

TEST_CASE("classify_seed: escape to infinity for a rational map") {
  const FateLabel l = classify_seed(parse("z^2"), 3.0);
  CHECK(l.kind == FateKind::AttractingBasin);
  CHECK(l.at_infinity);
}

TEST_CASE("classify_seed: Julia points stay undecided") {
  const FateLabel l = classify_seed(parse("tan(z)"), kPi / 2);
  CHECK(l.kind == FateKind::JuliaOrUndecided);
}

TEST_CASE("escape_rate_check") {
  const MeroFn fatou = parse("z + 1 + exp(-z)");
  const OrbitRecord raw = iterate(fatou, 2.0, 2000);
  const auto per = escape_period(raw);
  REQUIRE(per.has_value());
  CHECK(per->first == 1);
  const OrbitRecord esc = escaping_record(fatou, raw, per->first, per->second);
  REQUIRE(esc.fate.kind == Fate::Kind::Escaped);
  const RateCheck rc = escape_rate_check(esc, true);
  CHECK(rc.pass);
  CHECK(rc.fitted_slope < 0.1);
  CHECK(rc.points_used >= 20);
  const double n = static_cast<double>(esc.points.size() - 1);
  CHECK(std::abs(std::abs(esc.points.back()) / n - 1.0) < 0.05);

  const MeroFn wander = parse("z - 1 + exp(-z) + 6.283185307179586*i");
  const OrbitRecord wr = iterate(wander, 0.1, 2000);
  const auto wp = escape_period(wr);
  REQUIRE(wp.has_value());
  const RateCheck wc = escape_rate_check(escaping_record(wander, wr, wp->first, wp->second), true);
  CHECK(wc.pass);

  const OrbitRecord conv = iterate(parse("0.3*exp(z)"), 0.0, 200);
  CHECK_THROWS_AS(escape_rate_check(conv, true), TooShortOrbit);
}

TEST_CASE("tan keeps the upper half-plane invariant") {
  const MeroFn t = parse("tan(z)");
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> re(-10, 10), im(1e-3, 10);
  int failures = 0;
  for (int k = 0; k < 2000; ++k) {
    Complex z(re(rng), im(rng));
    for (int n = 0; n < 100; ++n) {
      const EvalOutcome v = t.eval(z);
      if (!v.ok() || !(v.value.imag() > 0)) {
        ++failures;
        break;
      }
      z = v.value;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("1/z - e^z: even and odd sub-orbits separate") {
  const OrbitRecord r = iterate(parse("1/z - exp(z)"), -10.0, 41);
  REQUIRE(r.points.size() == 41);
  for (int k = 2; k + 2 <= 40; k += 2) {
    CHECK(std::abs(r.points[k + 2]) > std::abs(r.points[k]));
    CHECK(std::abs(r.points[k + 1]) < std::abs(r.points[k - 1]));
  }
  const FateLabel l = classify_seed(parse("1/z - exp(z)"), -10.0);
  CHECK(l.kind == FateKind::BakerCandidate);
  CHECK(l.period == 2);
}

TEST_CASE("Baker candidates of period 1 respect the growth corridor") {
  for (const auto& e : cli::catalog()) {
    const MeroFn f = parse(e.expression);
    for (Complex seed : {Complex(1), Complex(2), Complex(5, 1), Complex(-10)}) {
      const FateLabel l = classify_seed(f, seed);
      if (l.kind != FateKind::BakerCandidate || l.period != 1) continue;
      CAPTURE(e.key);
      REQUIRE(l.rate.has_value());
      CHECK(l.rate->growth_exponent <= 4.0);
    }
  }
}
