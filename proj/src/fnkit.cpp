#include "holodyn/fnkit.hpp"

#include <algorithm>
#include <array>
#include <mutex>

#include "holodyn/errors.hpp"
#include "holodyn/polynomial.hpp"
#include "internal/complex_ops.hpp"

namespace holodyn {

using expr::Node;
using expr::NodePtr;
using expr::Op;

const char* to_string(FnClass c) {
  switch (c) {
    case FnClass::Rational: return "Rational";
    case FnClass::E: return "E";
    case FnClass::P: return "P";
    case FnClass::M: return "M";
  }
  return "?";
}

std::optional<FnClass> fn_class_from_string(std::string_view s) {
  if (s == "Rational") return FnClass::Rational;
  if (s == "E") return FnClass::E;
  if (s == "P") return FnClass::P;
  if (s == "M") return FnClass::M;
  return std::nullopt;
}

namespace {

// ------------------------------------------------------------ compiled form

struct Instr {
  Op op;
  int exponent = 0;
  Complex value{};
};

struct Program {
  std::vector<Instr> code;
  int max_stack = 0;
};

int emit(const Node& n, std::vector<Instr>& code) {
  int depth = 0;
  switch (n.op) {
    case Op::Const:
    case Op::Var: depth = 1; break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      int a = emit(*n.lhs, code);
      int b = emit(*n.rhs, code);
      depth = std::max(a, b + 1);
      break;
    }
    default: depth = emit(*n.lhs, code); break;
  }
  code.push_back(Instr{n.op, n.exponent, n.value});
  return depth;
}

Program compile(const NodePtr& ast) {
  Program p;
  p.max_stack = emit(*ast, p.code);
  return p;
}

constexpr int kInlineStack = 48;

EvalOutcome run(const Program& prog, std::span<const Complex> poles, Complex z) {
  for (Complex p : poles)
    if (std::abs(z - p) < kPoleTolerance) return EvalOutcome::pole();

  std::array<Complex, kInlineStack> inline_stack;
  std::vector<Complex> heap_stack;
  Complex* st = inline_stack.data();
  if (prog.max_stack > kInlineStack) {
    heap_stack.resize(prog.max_stack);
    st = heap_stack.data();
  }
  int sp = 0;
  for (const Instr& in : prog.code) {
    switch (in.op) {
      case Op::Const: st[sp++] = in.value; break;
      case Op::Var: st[sp++] = z; break;
      case Op::Add: st[sp - 2] = st[sp - 2] + st[sp - 1]; --sp; break;
      case Op::Sub: st[sp - 2] = st[sp - 2] - st[sp - 1]; --sp; break;
      case Op::Mul: st[sp - 2] = st[sp - 2] * st[sp - 1]; --sp; break;
      case Op::Div: {
        const Complex num = st[sp - 2];
        const Complex den = st[sp - 1];
        if (den == 0.0) return EvalOutcome::pole();
        const Complex q = num / den;
        if (!is_finite(q) || std::abs(q) > kOverflowCap) {
          if (is_finite(num) && is_finite(den) && std::abs(num) < 1e150) return EvalOutcome::pole();
          return EvalOutcome::overflow();
        }
        st[sp - 2] = q;
        --sp;
        break;
      }
      case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::Pow: {
        const Complex b = st[sp - 1];
        if (in.exponent < 0 && b == 0.0) return EvalOutcome::pole();
        const Complex v = detail::ipow(b, in.exponent);
        if (in.exponent < 0 && (!is_finite(v) || std::abs(v) > kOverflowCap))
          return EvalOutcome::pole();
        st[sp - 1] = v;
        break;
      }
      case Op::Tan:
        if (detail::tan_pole_distance(st[sp - 1]) < kPoleTolerance) return EvalOutcome::pole();
        st[sp - 1] = std::tan(st[sp - 1]);
        break;
      case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case Op::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case Op::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
    }
  }
  const Complex w = st[0];
  if (!is_finite(w) || std::abs(w) > kOverflowCap) return EvalOutcome::overflow();
  return EvalOutcome::finite(w);
}

// ------------------------------------------------------------ structure

bool has_transcendental(const NodePtr& n) {
  if (!n) return false;
  if (expr::is_function(n->op)) return true;
  return has_transcendental(n->lhs) || has_transcendental(n->rhs);
}

bool is_pole_free(const NodePtr& n);

// No zeros anywhere in the plane (poles allowed only through entire denominators).
bool is_zero_free(const NodePtr& n) {
  switch (n->op) {
    case Op::Const: return n->value != 0.0;
    case Op::Exp: return true;
    case Op::Mul: return is_zero_free(n->lhs) && is_zero_free(n->rhs);
    case Op::Neg: return is_zero_free(n->lhs);
    case Op::Div: return is_zero_free(n->lhs) && is_pole_free(n->rhs);
    case Op::Pow: return n->exponent > 0 ? is_zero_free(n->lhs) : is_pole_free(n->lhs);
    default: return false;
  }
}

bool is_pole_free(const NodePtr& n) {
  switch (n->op) {
    case Op::Const:
    case Op::Var: return true;
    case Op::Add:
    case Op::Sub:
    case Op::Mul: return is_pole_free(n->lhs) && is_pole_free(n->rhs);
    case Op::Neg: return is_pole_free(n->lhs);
    case Op::Div:
      return is_pole_free(n->lhs) && is_pole_free(n->rhs) &&
             (expr::is_z_free(n->rhs) || is_zero_free(n->rhs));
    case Op::Pow:
      return is_pole_free(n->lhs) && (n->exponent >= 0 || is_zero_free(n->lhs));
    case Op::Exp:
    case Op::Sin:
    case Op::Cos: return is_pole_free(n->lhs);
    case Op::Tan: return expr::is_z_free(n->lhs);
  }
  return false;
}

// Transcendental functions applied to arguments with poles have essential
// singularities in the plane.
bool functions_have_entire_arguments(const NodePtr& n) {
  if (!n) return true;
  if (expr::is_function(n->op) && !is_pole_free(n->lhs)) return false;
  return functions_have_entire_arguments(n->lhs) && functions_have_entire_arguments(n->rhs);
}

struct Monomial {
  Complex center{};
  int order = 0;
};

// c * (z - z0)^m
std::optional<Monomial> match_monomial(const NodePtr& n) {
  switch (n->op) {
    case Op::Var: return Monomial{0.0, 1};
    case Op::Sub:
      if (n->lhs->op == Op::Var && expr::is_constant(n->rhs)) return Monomial{n->rhs->value, 1};
      return std::nullopt;
    case Op::Add:
      if (n->lhs->op == Op::Var && expr::is_constant(n->rhs)) return Monomial{-n->rhs->value, 1};
      if (n->rhs->op == Op::Var && expr::is_constant(n->lhs)) return Monomial{-n->lhs->value, 1};
      return std::nullopt;
    case Op::Neg: return match_monomial(n->lhs);
    case Op::Mul: {
      if (expr::is_constant(n->lhs) && n->lhs->value != 0.0) return match_monomial(n->rhs);
      if (expr::is_constant(n->rhs) && n->rhs->value != 0.0) return match_monomial(n->lhs);
      auto a = match_monomial(n->lhs);
      auto b = match_monomial(n->rhs);
      if (a && b && a->center == b->center) return Monomial{a->center, a->order + b->order};
      return std::nullopt;
    }
    case Op::Pow:
      if (n->exponent > 0) {
        auto a = match_monomial(n->lhs);
        if (a) return Monomial{a->center, a->order * n->exponent};
      }
      return std::nullopt;
    default: return std::nullopt;
  }
}

struct PForm {
  std::optional<Complex> center;
  int order = 0;  // total pole order
  bool has_exp = false;
};

bool merge_center(PForm& f, Complex c) {
  if (f.center && *f.center != c) return false;
  f.center = c;
  return true;
}

// Zero-free numerator over monomial denominators: e^{g} / (z - z0)^m.
std::optional<PForm> match_p_form(const NodePtr& n) {
  switch (n->op) {
    case Op::Const:
      if (n->value == 0.0) return std::nullopt;
      return PForm{};
    case Op::Exp:
      if (!is_pole_free(n->lhs)) return std::nullopt;
      return PForm{std::nullopt, 0, true};
    case Op::Neg: return match_p_form(n->lhs);
    case Op::Mul: {
      auto a = match_p_form(n->lhs);
      auto b = match_p_form(n->rhs);
      if (!a || !b) return std::nullopt;
      PForm out = *a;
      out.has_exp = a->has_exp || b->has_exp;
      out.order += b->order;
      if (b->center && !merge_center(out, *b->center)) return std::nullopt;
      return out;
    }
    case Op::Div: {
      auto a = match_p_form(n->lhs);
      if (!a) return std::nullopt;
      if (auto m = match_monomial(n->rhs)) {
        if (!merge_center(*a, m->center)) return std::nullopt;
        a->order += m->order;
        return a;
      }
      auto b = match_p_form(n->rhs);
      if (!b || b->order != 0) return std::nullopt;
      a->has_exp = a->has_exp || b->has_exp;
      return a;
    }
    case Op::Pow: {
      if (n->exponent < 0) {
        if (auto m = match_monomial(n->lhs)) {
          PForm out;
          out.center = m->center;
          out.order = m->order * -n->exponent;
          return out;
        }
      }
      auto a = match_p_form(n->lhs);
      if (!a || (n->exponent < 0 && a->order != 0)) return std::nullopt;
      a->order *= std::abs(n->exponent);
      return a;
    }
    default: return std::nullopt;
  }
}

struct PoleScan {
  std::vector<Complex> poles;
  std::vector<Complex> removable;  // denominator zeros where the numerator vanishes too
};

void add_unique(std::vector<Complex>& v, Complex p) {
  for (Complex q : v)
    if (std::abs(p - q) < 1e-9 * std::max(1.0, std::abs(p))) return;
  v.push_back(p);
}

void scan_poles(const NodePtr& n, PoleScan& out) {
  if (!n) return;
  scan_poles(n->lhs, out);
  scan_poles(n->rhs, out);
  const NodePtr* den = nullptr;
  if (n->op == Op::Div) den = &n->rhs;
  if (n->op == Op::Pow && n->exponent < 0) den = &n->lhs;
  if (!den || expr::is_z_free(*den) || !poly::degree_bound(*den)) return;
  auto coeffs = poly::coefficients(*den);
  if (coeffs.size() < 2) return;
  for (const auto& cl : poly::distinct_roots(coeffs, 1e-6)) {
    Complex r = cl.center;
    if (n->op == Op::Div) {
      Complex num = expr::evaluate(*n->lhs, r);
      if (std::abs(num) < 1e-9) {
        add_unique(out.removable, r);
        continue;
      }
    }
    add_unique(out.poles, r);
  }
}

struct Analysis {
  std::optional<FnClass> syntactic;
  std::string ambiguity;
};

Analysis analyze(const NodePtr& ast, const PoleScan& scan) {
  Analysis a;
  if (!has_transcendental(ast)) {
    a.syntactic = FnClass::Rational;
    return a;
  }
  if (!functions_have_entire_arguments(ast)) {
    a.ambiguity = "transcendental function of an argument with poles is not meromorphic in the plane";
    return a;
  }
  if (is_pole_free(ast)) {
    a.syntactic = FnClass::E;
    return a;
  }
  if (auto p = match_p_form(ast); p && p->has_exp && p->order >= 1 && p->center) {
    a.syntactic = FnClass::P;
    return a;
  }
  if (!scan.removable.empty()) {
    const Complex r = scan.removable.front();
    a.ambiguity = "numerator and denominator both vanish at " + std::to_string(r.real()) +
                  (r.imag() < 0 ? "-" : "+") + std::to_string(std::abs(r.imag())) + "i";
    return a;
  }
  a.syntactic = FnClass::M;
  return a;
}

}  // namespace

struct MeroFn::Impl {
  NodePtr ast;
  Program program;
  std::vector<Complex> poles;
  std::optional<FnClass> annotation;
  Analysis analysis;
  bool pole_free = false;
  mutable std::once_flag derivative_once;
  mutable std::unique_ptr<MeroFn> derivative;
};

MeroFn::MeroFn(NodePtr ast, std::optional<FnClass> annotation) {
  auto impl = std::make_shared<Impl>();
  PoleScan scan;
  scan_poles(ast, scan);
  impl->program = compile(ast);
  impl->poles = std::move(scan.poles);
  impl->annotation = annotation;
  impl->analysis = analyze(ast, scan);
  impl->pole_free = is_pole_free(ast);
  impl->ast = std::move(ast);
  impl_ = std::move(impl);
}

EvalOutcome MeroFn::eval(Complex z) const { return run(impl_->program, impl_->poles, z); }

const MeroFn& MeroFn::derivative() const {
  std::call_once(impl_->derivative_once, [this] {
    MeroFn d(expr::derivative(impl_->ast));
    std::vector<Complex> poles(d.pole_hints().begin(), d.pole_hints().end());
    for (Complex p : impl_->poles) add_unique(poles, p);
    impl_->derivative = std::make_unique<MeroFn>(d.with_pole_hints(std::move(poles)));
  });
  return *impl_->derivative;
}

const NodePtr& MeroFn::ast() const { return impl_->ast; }

std::string MeroFn::to_string() const { return expr::serialize(impl_->ast); }

FnClass MeroFn::fn_class() const {
  if (impl_->annotation) return *impl_->annotation;
  if (impl_->analysis.syntactic) return *impl_->analysis.syntactic;
  throw ClassificationAmbiguous(impl_->analysis.ambiguity);
}

std::optional<FnClass> MeroFn::annotation() const { return impl_->annotation; }

MeroFn MeroFn::with_class(FnClass annotation) const {
  auto impl = std::make_shared<Impl>();
  impl->ast = impl_->ast;
  impl->program = impl_->program;
  impl->poles = impl_->poles;
  impl->annotation = annotation;
  impl->analysis = impl_->analysis;
  impl->pole_free = impl_->pole_free;
  return MeroFn(std::shared_ptr<const Impl>(std::move(impl)));
}

std::span<const Complex> MeroFn::pole_hints() const { return impl_->poles; }

MeroFn MeroFn::with_pole_hints(std::vector<Complex> poles) const {
  auto impl = std::make_shared<Impl>();
  impl->ast = impl_->ast;
  impl->program = impl_->program;
  impl->poles = std::move(poles);
  impl->annotation = impl_->annotation;
  impl->analysis = impl_->analysis;
  impl->pole_free = impl_->pole_free;
  return MeroFn(std::shared_ptr<const Impl>(std::move(impl)));
}

bool MeroFn::pole_free() const { return impl_->pole_free; }

MeroFn parse(std::string_view text, std::optional<FnClass> annotation) {
  return MeroFn(expr::parse(text), annotation);
}

Complex parse_constant(std::string_view text) {
  NodePtr n = expr::parse(text);
  if (!expr::is_z_free(n))
    throw InvalidArgument("expected a constant expression, got '" + std::string(text) + "'");
  return expr::evaluate(*n, 0.0);
}

std::string serialize(const MeroFn& f) { return f.to_string(); }

MeroFn differentiate(const MeroFn& f) { return f.derivative(); }

FnClass classify_class(const MeroFn& f) {
  if (!f.annotation()) return f.fn_class();
  return MeroFn(f.ast()).fn_class();
}

std::optional<Complex> omitted_value(const MeroFn& f) {
  const NodePtr& n = f.ast();
  if (expr::is_z_free(n)) return std::nullopt;
  if (is_zero_free(n)) return Complex(0.0);
  if (n->op == Op::Add || n->op == Op::Sub) {
    const bool plus = n->op == Op::Add;
    if (expr::is_constant(n->lhs) && is_zero_free(n->rhs)) return n->lhs->value;
    if (expr::is_constant(n->rhs) && is_zero_free(n->lhs))
      return plus ? n->rhs->value : -n->rhs->value;
  }
  return std::nullopt;
}

}  // namespace holodyn
