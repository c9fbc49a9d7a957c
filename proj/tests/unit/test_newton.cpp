#include <doctest.h>

#include <algorithm>
#include <random>

#include "holodyn/errors.hpp"
#include "holodyn/newton.hpp"
#include "../support/oracles.hpp"

using namespace holodyn;

namespace {

const char* kSmale = "z^3 - z + 0.7071067811865476";

}  // namespace

TEST_CASE("make_relaxed: identity f_h = z - h g/g'") {
  const MeroFn g = parse("z^3 - 2*z + exp(z)/5");
  std::mt19937_64 rng(3);
  for (Complex h : {Complex(1.0), Complex(0.5), Complex(0.8, 0.3)}) {
    const NewtonSetup s = make_relaxed(g, h, {});
    REQUIRE(s.f_h.has_value());
    int checked = 0;
    while (checked < 100) {
      const Complex z = oracle::random_point(rng, 3.0);
      const Complex g0 = z * z * z - 2.0 * z + std::exp(z) / 5.0;
      const Complex g1 = 3.0 * z * z - 2.0 + std::exp(z) / 5.0;
      if (std::abs(g1) < 1e-3) continue;
      const EvalOutcome v = s.f_h->eval(z);
      REQUIRE(v.ok());
      CHECK(std::abs(v.value - z + h * g0 / g1) < 1e-10 * std::max(1.0, std::abs(z)));
      ++checked;
    }
  }
}

TEST_CASE("make_relaxed: argument checks") {
  CHECK_THROWS_AS(make_relaxed(parse("z^2 - 1"), 2.5), InvalidArgument);
  CHECK_THROWS_AS(make_relaxed(parse("z^2 - 1"), 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_relaxed(parse("3"), 1.0), InvalidArgument);
  CHECK_NOTHROW(make_relaxed(parse("z^2 - 1"), Complex(1.5, 0.5)));
}

TEST_CASE("make_relaxed: multiplier law 1 - h/m") {
  for (int m : {1, 2, 3, 5}) {
    for (double h : {1.0, 0.5, 0.3}) {
      CAPTURE(m);
      CAPTURE(h);
      const NewtonSetup s = make_relaxed(parse("(z - 1)^" + std::to_string(m)), h);
      REQUIRE(s.roots.size() == 1);
      CHECK(std::abs(s.roots[0].location - 1.0) < 1e-9);
      CHECK(s.roots[0].multiplicity == m);
      CHECK(std::abs(s.roots[0].multiplier - (1.0 - h / m)) < 1e-9);
      CHECK(s.roots[0].multiplicity_from_multiplier == m);
    }
  }
}

TEST_CASE("make_relaxed: simple roots are superattracting at h = 1") {
  const NewtonSetup s = make_relaxed(parse("z^2 - 1"), 1.0);
  REQUIRE(s.roots.size() == 2);
  for (const auto& r : s.roots) {
    CHECK(std::abs(s.iterator->value(r.location).value - r.location) < 1e-10);
    CHECK(std::abs(r.multiplier) < 1e-9);
  }
  for (Complex z : {Complex(0.3, 0.7), Complex(-2, 1)})
    CHECK(std::abs(s.iterator->value(z).value - 0.5 * (z + 1.0 / z)) < 1e-14);
}

TEST_CASE("make_relaxed: transcendental roots from the lattice") {
  const NewtonSetup s = make_relaxed(parse("exp(z) - 2"), 1.0, {Box{-1, 2, -7, 7}, 30, 0.02});
  REQUIRE(s.roots.size() == 3);
  for (int k = -1; k <= 1; ++k) {
    const Complex want(std::log(2.0), kTwoPi * k);
    CHECK(std::any_of(s.roots.begin(), s.roots.end(), [&](const auto& r) { return std::abs(r.location - want) < 1e-9; }));
  }
}

TEST_CASE("smale_test") {
  const NewtonSetup s = make_relaxed(parse(kSmale), 1.0);
  const SmaleReport r = smale_test(s);
  CHECK(r.verdict == SmaleReport::Verdict::Obstructed);
  REQUIRE(r.singular.size() == 1);
  CHECK(std::abs(r.singular[0].point) < 1e-12);
  CHECK(r.singular[0].fate.kind == Fate::Kind::CycleOfPeriod);
  CHECK(r.singular[0].fate.period == 2);
  REQUIRE(!r.obstructing_cycles.empty());
  CHECK(r.obstructing_cycles[0].minimal_period == 2);

  const SmaleReport q = smale_test(make_relaxed(parse("z^2 - 1"), 1.0));
  CHECK(q.singular.empty());
  CHECK(q.verdict == SmaleReport::Verdict::Guaranteed);

  const SmaleReport c = smale_test(make_relaxed(parse("z^3 - z"), 1.0));
  REQUIRE(c.singular.size() == 1);
  CHECK(c.singular[0].root_index >= 0);
  CHECK(c.verdict == SmaleReport::Verdict::Guaranteed);
}

TEST_CASE("flow_basin") {
  const NewtonSetup s = make_relaxed(parse("z^2 - 1"), 1.0);
  const auto root_of = [&](Complex z) {
    for (std::size_t k = 0; k < s.roots.size(); ++k)
      if (std::abs(s.roots[k].location - z) < 1e-9) return static_cast<int>(k);
    return -1;
  };
  const FlowOutcome a = flow_basin(s, 2.0);
  CHECK(a.kind == FlowOutcome::Kind::Root);
  CHECK(a.root_index == root_of(1.0));

  // Independent RK4 oracle on the real flow.
  Complex z = 2.0;
  for (int k = 0; k < 4000; ++k) z = oracle::rk4_step([](Complex w) { return -(w * w - 1.0) / (2.0 * w); }, z, 1e-2);
  CHECK(std::abs(z - 1.0) < 1e-8);
  CHECK(std::abs(a.terminal - 1.0) < 1e-3);

  const FlowOutcome b = flow_basin(s, 1.0);
  CHECK(b.kind == FlowOutcome::Kind::Root);
  CHECK(b.steps == 0);

  const FlowOutcome c = flow_basin(s, Complex(0, 2));
  CHECK(c.kind != FlowOutcome::Kind::Root);
}

TEST_CASE("basin_measures: z^2 - 1") {
  const NewtonSetup s = make_relaxed(parse("z^2 - 1"), 1.0);
  BasinParams bp;
  bp.include_flow = true;
  const auto reports = basin_measures({s}, Box::square(2.0), 24, 24, 200, bp);
  REQUIRE(reports.size() == 1);
  const BasinReport& r = reports[0];
  double sum = r.iteration_nonconvergent, fsum = r.flow_nonconvergent;
  for (double f : r.iteration_fractions) sum += f;
  for (double f : r.flow_fractions) fsum += f;
  CHECK(sum <= 1.0 + 1e-9);
  CHECK(fsum <= 1.0 + 1e-9);
  CHECK(r.iteration_nonconvergent <= 0.01);

  // Flow and iteration agree away from the imaginary axis.
  for (int row = 0; row < 24; row += 2)
    for (int col = 0; col < 24; col += 2) {
      const Complex z = r.box.lattice_point(col, row, 24, 24);
      if (std::abs(z.real()) <= 0.1) continue;
      const FlowOutcome fo = flow_basin(s, z);
      CHECK(fo.root_index == r.labels[static_cast<std::size_t>(row) * 24 + col]);
    }
}

TEST_CASE("basin_measures: relaxation sweep for z^3 - z + 1/sqrt2") {
  std::vector<NewtonSetup> setups;
  for (double h : {1.0, 0.5, 0.25}) setups.push_back(make_relaxed(parse(kSmale), h));
  const auto reports = basin_measures(setups, Box::square(2.0), 100, 100, 300);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].iteration_nonconvergent > 0.0);
  CHECK(!reports[0].off_root_cycles.empty());
  CHECK(reports[1].iteration_nonconvergent <= reports[0].iteration_nonconvergent);
  CHECK(reports[2].iteration_nonconvergent <= reports[1].iteration_nonconvergent);
  const GrayImage img = render_basins(reports[0]);
  CHECK(img.pixels.size() == 100u * 100u);
}

TEST_CASE("IntegralTarget against a closed form") {
  // g(z) = integral of e^t from 0 to z, minus 1 = e^z - 2.
  auto t = std::make_shared<IntegralTarget>(parse("1"), parse("z"), Complex(-1.0));
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const Complex z = oracle::random_point(rng, 2.0);
    const EvalOutcome v = t->value(z);
    REQUIRE(v.ok());
    CHECK(std::abs(v.value - (std::exp(z) - 2.0)) < 1e-9);
  }
  t->warm(Box::square(2.0), 8);
  CHECK(std::abs(t->value({1.3, -0.4}).value - (std::exp(Complex(1.3, -0.4)) - 2.0)) < 1e-9);

  const NewtonSetup s = make_relaxed(std::shared_ptr<const NewtonTarget>(t), 1.0, {Box::square(2.0), 20, 0.02});
  REQUIRE(s.roots.size() == 1);
  CHECK(std::abs(s.roots[0].location - std::log(2.0)) < 1e-8);
}

TEST_CASE("IntegralTarget: singular points come from p q' + p'") {
  // p = z, q = -z^2/2: g'' = (1 - z^2) e^q, zeros at +-1.
  auto t = std::make_shared<IntegralTarget>(parse("z"), parse("-z^2/2"), Complex(0.5));
  const NewtonSetup s = make_relaxed(std::shared_ptr<const NewtonTarget>(t), 1.0, {Box::square(3.0), 20, 0.02});
  const SmaleReport r = smale_test(s, Box::square(3.0));
  REQUIRE(r.singular.size() == 2);
  CHECK(std::abs(std::abs(r.singular[0].point) - 1.0) < 1e-9);
}
