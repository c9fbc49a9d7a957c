#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "holodyn/cli.hpp"
#include "holodyn/errors.hpp"
#include "holodyn/fnkit.hpp"
#include "../support/oracles.hpp"

using namespace holodyn;

namespace {

Complex value_of(const MeroFn& f, Complex z) {
  const EvalOutcome r = f.eval(z);
  REQUIRE(r.ok());
  return r.value;
}

const std::vector<std::string> kSamples = {
    "z + 1 + exp(-z)", "1/z - exp(z)", "z - 1 + exp(-z) + 6.283185307179586*i", "0.3*exp(z)",
    "exp(z)", "exp(z) + z", "2*tan(z)", "0.5*tan(z)", "z^3 - z + 0.7071067811865476",
    "exp(z)/z", "sin(z)*cos(2*z) - z^2", "z + 0.3*sin(6.283185307179586*z) + 1",
    "(z^2 + 1)/(z - 2)^3", "0.2*z*exp(z)", "exp(z^2)/(z - 1)^2", "tan(z)^2 - 1/(z + 3)"};

}  // namespace

TEST_CASE("parse: basic evaluation") {
  const MeroFn id = parse("z");
  CHECK(value_of(id, {3, 4}) == Complex(3, 4));
  CHECK(std::abs(value_of(parse("0.3*exp(z)"), 0.0) - 0.3) < 1e-15);

  const MeroFn fatou = parse("z + 1 + exp(-z)");
  REQUIRE(fatou.ast()->op == expr::Op::Add);
  // Left-associated sum of three terms.
  CHECK(fatou.ast()->lhs->op == expr::Op::Add);
  const Complex z(0.7, -1.1);
  CHECK(std::abs(value_of(fatou, z) - (z + 1.0 + std::exp(-z))) < 1e-14);
}

TEST_CASE("parse: grammar details") {
  CHECK(std::abs(value_of(parse("2*i"), 0.0) - Complex(0, 2)) == 0.0);
  CHECK(std::abs(value_of(parse("  z ^ 2 "), {1, 1}) - Complex(0, 2)) < 1e-15);
  CHECK(std::abs(value_of(parse("1.5e1"), 0.0) - 15.0) < 1e-15);
  CHECK(std::abs(value_of(parse("z^-1"), 4.0) - 0.25) < 1e-15);
  CHECK(std::abs(value_of(parse("-z"), 2.0) + 2.0) < 1e-15);
  CHECK(std::abs(value_of(parse("pi"), 0.0) - kPi) < 1e-15);
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse("z +"), SyntaxError);
  CHECK_THROWS_AS(parse("(z"), SyntaxError);
  CHECK_THROWS_AS(parse("z ^ 1.5"), SyntaxError);
  CHECK_THROWS_AS(parse(""), SyntaxError);
  CHECK_THROWS_AS(parse("log(z)"), UnsupportedFunction);
  CHECK_THROWS_AS(parse("sqrt(z)"), UnsupportedFunction);
  try {
    parse("z * * 2");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("eval: poles and overflow") {
  const MeroFn t = parse("tan(z)");
  CHECK(std::abs(value_of(t, kPi / 4) - 1.0) < 1e-14);
  CHECK(t.eval(kPi / 2).kind == EvalOutcome::Kind::PoleHit);
  CHECK(t.eval(kPi / 2 + 3 * kPi).kind == EvalOutcome::Kind::PoleHit);
  CHECK(parse("exp(z)/z").eval(0.0).kind == EvalOutcome::Kind::PoleHit);
  CHECK(parse("1/(z - 2)^2").eval(2.0 + 1e-10).kind == EvalOutcome::Kind::PoleHit);
  CHECK(parse("exp(z)").eval(800.0).kind == EvalOutcome::Kind::Overflow);
  CHECK(parse("exp(exp(z))").eval(7.0).kind == EvalOutcome::Kind::Overflow);
}

TEST_CASE("eval: relative accuracy against std::complex") {
  std::mt19937_64 rng(7);
  const MeroFn f = parse("sin(z)*cos(2*z) - z^2 + exp(z)/3");
  for (int k = 0; k < 100; ++k) {
    const Complex z = oracle::random_point(rng, 3.0);
    const Complex exact = std::sin(z) * std::cos(2.0 * z) - z * z + std::exp(z) / 3.0;
    CHECK(std::abs(value_of(f, z) - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("differentiate: examples") {
  CHECK(serialize(differentiate(parse("exp(z)"))) == "exp(z)");
  CHECK(std::abs(value_of(parse("tan(z)").derivative(), 0.0) - 1.0) < 1e-15);

  // Newton map derivative equals g g'' / g'^2.
  const MeroFn N = parse("z - (z^3 - z + 0.70710678)/(3*z^2 - 1)");
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const Complex z = oracle::random_point(rng, 2.0);
    const Complex g = z * z * z - z + 0.70710678;
    const Complex g1 = 3.0 * z * z - 1.0;
    const Complex g2 = 6.0 * z;
    const Complex expect = g * g2 / (g1 * g1);
    CHECK(std::abs(value_of(N.derivative(), z) - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("FD-1: symbolic derivative matches central differences") {
  std::mt19937_64 rng(2024);
  for (const auto& text : kSamples) {
    CAPTURE(text);
    const MeroFn f = parse(text);
    int checked = 0;
    while (checked < 200) {
      const Complex z = oracle::random_point(rng, 5.0);
      const EvalOutcome d = f.derivative().eval(z);
      const EvalOutcome a = f.eval(z + 1e-6);
      const EvalOutcome b = f.eval(z - 1e-6);
      // Skip points where the difference quotient is dominated by a nearby pole.
      if (!d.ok() || !a.ok() || !b.ok() || std::abs(d.value) > 1e4) continue;
      const Complex fd = (a.value - b.value) / 2e-6;
      CHECK(std::abs(d.value - fd) / std::max(1.0, std::abs(d.value)) <= 1e-6);
      ++checked;
    }
  }
}

TEST_CASE("serialize: round trip is bit-exact") {
  std::mt19937_64 rng(5);
  for (const auto& text : kSamples) {
    CAPTURE(text);
    const MeroFn f = parse(text);
    const MeroFn g = parse(serialize(f));
    CHECK(serialize(g) == serialize(f));
    for (int k = 0; k < 100; ++k) {
      const Complex z = oracle::random_point(rng, 4.0);
      const EvalOutcome a = f.eval(z);
      const EvalOutcome b = g.eval(z);
      CHECK(a.kind == b.kind);
      if (a.ok() && b.ok()) CHECK(a.value == b.value);
    }
  }
}

TEST_CASE("classify_class") {
  CHECK(classify_class(parse("exp(z)")) == FnClass::E);
  CHECK(classify_class(parse("exp(z)/z")) == FnClass::P);
  CHECK(classify_class(parse("exp(2*z + 1)/(z - 3)^2")) == FnClass::P);
  CHECK(classify_class(parse("2*tan(z)")) == FnClass::M);
  CHECK(classify_class(parse("z^2 + 1/z")) == FnClass::Rational);
  CHECK(classify_class(parse("sin(z) + z")) == FnClass::E);

  // Annotation overrides, syntax unchanged.
  const MeroFn a = parse("exp(z)", FnClass::M);
  CHECK(a.fn_class() == FnClass::M);
  CHECK(classify_class(a) == FnClass::E);

  // Class survives re-parsing of the serialized text.
  for (const auto& text : kSamples) {
    const MeroFn f = parse(text);
    try {
      CHECK(classify_class(parse(serialize(f))) == classify_class(f));
    } catch (const ClassificationAmbiguous&) {
      CHECK_THROWS_AS(classify_class(f), ClassificationAmbiguous);
    }
  }
}

TEST_CASE("classify_class: catalog soundness") {
  for (const auto& e : cli::catalog()) {
    CAPTURE(e.key);
    CHECK(classify_class(parse(e.expression)) == e.fn_class);
  }
}

TEST_CASE("omitted values") {
  CHECK(omitted_value(parse("exp(z)")) == Complex(0.0));
  CHECK(omitted_value(parse("0.3*exp(z)")) == Complex(0.0));
  CHECK(omitted_value(parse("exp(z) - 1")) == Complex(-1.0));
  CHECK_FALSE(omitted_value(parse("exp(z) + z")).has_value());
  CHECK_FALSE(omitted_value(parse("z^2")).has_value());
}

TEST_CASE("parse_constant") {
  CHECK(std::abs(parse_constant("pi/2") - kPi / 2) < 1e-15);
  CHECK(parse_constant("5+i") == Complex(5, 1));
  CHECK(parse_constant("-10") == Complex(-10));
  CHECK_THROWS_AS(parse_constant("z + 1"), InvalidArgument);
}
