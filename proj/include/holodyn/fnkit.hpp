// Parsed meromorphic maps: evaluation with pole/overflow reporting,
// symbolic derivatives and the Rational / E / P / M class tag.
//
// Class E are transcendental entire maps, class P maps with exactly one pole
// which is an omitted value (syntactically: e^{g} / (z - z0)^m), and class M
// every other transcendental meromorphic map.
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holodyn/core.hpp"
#include "holodyn/expr.hpp"

namespace holodyn {

struct EvalOutcome {
  enum class Kind { Finite, PoleHit, Overflow };

  Kind kind = Kind::Finite;
  Complex value{};

  static EvalOutcome finite(Complex w) { return {Kind::Finite, w}; }
  static EvalOutcome pole() { return {Kind::PoleHit, {}}; }
  static EvalOutcome overflow() { return {Kind::Overflow, {}}; }

  bool ok() const { return kind == Kind::Finite; }
};

/// Anything that can be iterated: a value and a derivative at each point.
class ComplexMap {
 public:
  virtual ~ComplexMap() = default;
  virtual EvalOutcome value(Complex z) const = 0;
  virtual EvalOutcome slope(Complex z) const = 0;
};

enum class FnClass { Rational, E, P, M };

const char* to_string(FnClass c);
std::optional<FnClass> fn_class_from_string(std::string_view s);

/// Immutable handle to a parsed map. Copies share the parsed tree and the
/// lazily built derivative, so evaluation is safe from any thread.
class MeroFn final : public ComplexMap {
 public:
  explicit MeroFn(expr::NodePtr ast, std::optional<FnClass> annotation = std::nullopt);

  EvalOutcome eval(Complex z) const;
  EvalOutcome value(Complex z) const override { return eval(z); }
  EvalOutcome slope(Complex z) const override { return derivative().eval(z); }

  /// Symbolic derivative, built once on first use.
  const MeroFn& derivative() const;

  const expr::NodePtr& ast() const;
  std::string to_string() const;

  /// Annotated class if present, else the syntactic class.
  /// Throws ClassificationAmbiguous when neither is available.
  FnClass fn_class() const;
  std::optional<FnClass> annotation() const;
  MeroFn with_class(FnClass annotation) const;

  /// Finite pole locations known from polynomial denominators.
  std::span<const Complex> pole_hints() const;
  MeroFn with_pole_hints(std::vector<Complex> poles) const;

  /// True when no node can produce a pole (the map is entire).
  bool pole_free() const;

 private:
  struct Impl;
  explicit MeroFn(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Parse an expression; throws SyntaxError / UnsupportedFunction.
MeroFn parse(std::string_view text, std::optional<FnClass> annotation = std::nullopt);
/// Parse a z-free expression to its value; throws InvalidArgument if it mentions z.
Complex parse_constant(std::string_view text);
std::string serialize(const MeroFn& f);
MeroFn differentiate(const MeroFn& f);

/// Syntactic classification (ignores annotations).
/// Throws ClassificationAmbiguous when the syntax cannot decide.
FnClass classify_class(const MeroFn& f);

/// A value the map provably never takes, detected for maps of the form
/// a + (zero-free product), e.g. 0 for exp(z). nullopt when none is detected.
std::optional<Complex> omitted_value(const MeroFn& f);

}  // namespace holodyn
