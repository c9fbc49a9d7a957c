#include "holodyn/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

#include "holodyn/errors.hpp"
#include "internal/complex_ops.hpp"

namespace holodyn::expr {
namespace {

std::shared_ptr<Node> make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// Signed zeros are dropped so that folded constants serialize and re-parse
// to the same bits.
Complex normalize_zero(Complex c) {
  double re = c.real() == 0.0 ? 0.0 : c.real();
  double im = c.imag() == 0.0 ? 0.0 : c.imag();
  return {re, im};
}

}  // namespace

bool is_function(Op op) { return op == Op::Exp || op == Op::Sin || op == Op::Cos || op == Op::Tan; }

const char* function_name(Op op) {
  switch (op) {
    case Op::Exp: return "exp";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    default: return "?";
  }
}

NodePtr constant(Complex c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = normalize_zero(c);
  return n;
}

NodePtr variable() {
  static const NodePtr z = make(Op::Var);
  return z;
}

bool is_constant(const NodePtr& n) { return n->op == Op::Const; }

bool is_constant_value(const NodePtr& n, Complex c) { return n->op == Op::Const && n->value == c; }

bool is_z_free(const NodePtr& n) {
  if (!n) return true;
  if (n->op == Op::Var) return false;
  return is_z_free(n->lhs) && is_z_free(n->rhs);
}

NodePtr add(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return constant(a->value + b->value);
  if (is_constant_value(a, 0.0)) return b;
  if (is_constant_value(b, 0.0)) return a;
  return make(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return constant(a->value - b->value);
  if (is_constant_value(b, 0.0)) return a;
  if (is_constant_value(a, 0.0)) return neg(std::move(b));
  return make(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return constant(a->value * b->value);
  if (is_constant_value(a, 0.0) || is_constant_value(b, 0.0)) return constant(0.0);
  if (is_constant_value(a, 1.0)) return b;
  if (is_constant_value(b, 1.0)) return a;
  return make(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b) && b->value != 0.0) return constant(a->value / b->value);
  if (is_constant_value(a, 0.0) && !is_constant_value(b, 0.0)) return constant(0.0);
  if (is_constant_value(b, 1.0)) return a;
  return make(Op::Div, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (is_constant(a)) return constant(-a->value);
  if (a->op == Op::Neg) return a->lhs;
  return make(Op::Neg, std::move(a));
}

NodePtr pow(NodePtr a, int n) {
  if (n == 0) return constant(1.0);
  if (n == 1) return a;
  if (is_constant(a) && (n > 0 || a->value != 0.0)) return constant(detail::ipow(a->value, n));
  auto p = make(Op::Pow, std::move(a));
  p->exponent = n;
  return p;
}

NodePtr apply(Op fn, NodePtr a) {
  if (is_constant(a)) return constant(detail::apply_function(fn, a->value));
  return make(fn, std::move(a));
}

Complex evaluate(const Node& n, Complex z) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return z;
    case Op::Add: return evaluate(*n.lhs, z) + evaluate(*n.rhs, z);
    case Op::Sub: return evaluate(*n.lhs, z) - evaluate(*n.rhs, z);
    case Op::Mul: return evaluate(*n.lhs, z) * evaluate(*n.rhs, z);
    case Op::Div: return evaluate(*n.lhs, z) / evaluate(*n.rhs, z);
    case Op::Neg: return -evaluate(*n.lhs, z);
    case Op::Pow: return detail::ipow(evaluate(*n.lhs, z), n.exponent);
    default: return detail::apply_function(n.op, evaluate(*n.lhs, z));
  }
}

std::size_t size(const NodePtr& n) {
  if (!n) return 0;
  return 1 + size(n->lhs) + size(n->rhs);
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr run() {
    NodePtr n = expression();
    skip_ws();
    if (pos_ != s_.size()) throw SyntaxError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return n;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= s_.size()) throw SyntaxError(std::string("expected '") + c + "' but input ended", pos_);
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  NodePtr expression() {
    NodePtr n = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        n = add(n, term());
      } else if (peek('-')) {
        ++pos_;
        n = sub(n, term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = factor();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        n = mul(n, factor());
      } else if (peek('/')) {
        ++pos_;
        n = div(n, factor());
      } else {
        return n;
      }
    }
  }

  NodePtr factor() {
    if (peek('-')) {
      ++pos_;
      return neg(factor());
    }
    if (peek('+')) {
      ++pos_;
      return factor();
    }
    NodePtr b = base();
    if (peek('^')) {
      ++pos_;
      return pow(b, integer());
    }
    return b;
  }

  int integer() {
    skip_ws();
    std::size_t start = pos_;
    bool negative = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      negative = s_[pos_] == '-';
      ++pos_;
    }
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (digits == pos_) throw SyntaxError("expected integer exponent", start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + digits, s_.data() + pos_, value);
    if (ec != std::errc() || value > 4096) throw SyntaxError("exponent out of range", start);
    return negative ? -value : value;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expression();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    std::size_t start = pos_;
    auto digit = [&](std::size_t i) {
      return i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]));
    };
    bool any = false;
    while (digit(pos_)) ++pos_, any = true;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (digit(pos_)) ++pos_, any = true;
    }
    if (!any) throw SyntaxError("malformed number", start);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t e = pos_ + 1;
      if (e < s_.size() && (s_[e] == '+' || s_[e] == '-')) ++e;
      if (digit(e)) {
        pos_ = e;
        while (digit(pos_)) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || ptr != s_.data() + pos_) throw SyntaxError("malformed number", start);
    return constant(value);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (name == "z") return variable();
    if (name == "i") return constant(Complex(0.0, 1.0));
    if (name == "pi") return constant(kPi);
    Op fn;
    if (name == "exp") fn = Op::Exp;
    else if (name == "sin") fn = Op::Sin;
    else if (name == "cos") fn = Op::Cos;
    else if (name == "tan") fn = Op::Tan;
    else if (peek('(')) throw UnsupportedFunction(name, start);
    else throw SyntaxError("unknown identifier '" + name + "'", start);
    expect('(');
    NodePtr arg = expression();
    expect(')');
    return apply(fn, arg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- printer

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void write_constant(std::string& out, Complex c) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) {
    if (re < 0.0 || std::signbit(re)) {
      out += "(";
      append_double(out, re);
      out += ")";
    } else {
      append_double(out, re);
    }
    return;
  }
  out += "(";
  if (re != 0.0) {
    append_double(out, re);
    out += im < 0.0 ? "-" : "+";
    append_double(out, std::abs(im));
  } else {
    if (im < 0.0) out += "-";
    append_double(out, std::abs(im));
  }
  out += "*i)";
}

void write(std::string& out, const Node& n);

void write_operand(std::string& out, const Node& n, bool parens) {
  if (parens) out += "(";
  write(out, n);
  if (parens) out += ")";
}

void write(std::string& out, const Node& n) {
  switch (n.op) {
    case Op::Const: write_constant(out, n.value); return;
    case Op::Var: out += "z"; return;
    case Op::Add:
    case Op::Sub:
      write_operand(out, *n.lhs, precedence(*n.lhs) < 1);
      out += n.op == Op::Add ? " + " : " - ";
      write_operand(out, *n.rhs, precedence(*n.rhs) <= 1);
      return;
    case Op::Mul:
    case Op::Div:
      write_operand(out, *n.lhs, precedence(*n.lhs) < 2);
      out += n.op == Op::Mul ? "*" : "/";
      write_operand(out, *n.rhs, precedence(*n.rhs) <= 2);
      return;
    case Op::Neg:
      out += "-";
      write_operand(out, *n.lhs, precedence(*n.lhs) < 3);
      return;
    case Op::Pow:
      write_operand(out, *n.lhs, precedence(*n.lhs) < 5);
      out += "^";
      out += std::to_string(n.exponent);
      return;
    default:
      out += function_name(n.op);
      out += "(";
      write(out, *n.lhs);
      out += ")";
      return;
  }
}

}  // namespace

NodePtr parse(std::string_view text) { return Parser(text).run(); }

std::string serialize(const NodePtr& n) {
  std::string out;
  write(out, *n);
  return out;
}

// ---------------------------------------------------------------- derivative

NodePtr derivative(const NodePtr& n) {
  switch (n->op) {
    case Op::Const: return constant(0.0);
    case Op::Var: return constant(1.0);
    case Op::Add: return add(derivative(n->lhs), derivative(n->rhs));
    case Op::Sub: return sub(derivative(n->lhs), derivative(n->rhs));
    case Op::Mul:
      return add(mul(derivative(n->lhs), n->rhs), mul(n->lhs, derivative(n->rhs)));
    case Op::Div: {
      NodePtr num = sub(mul(derivative(n->lhs), n->rhs), mul(n->lhs, derivative(n->rhs)));
      return div(num, pow(n->rhs, 2));
    }
    case Op::Neg: return neg(derivative(n->lhs));
    case Op::Pow:
      return mul(mul(constant(static_cast<double>(n->exponent)), pow(n->lhs, n->exponent - 1)),
                 derivative(n->lhs));
    case Op::Exp: return mul(n, derivative(n->lhs));
    case Op::Sin: return mul(apply(Op::Cos, n->lhs), derivative(n->lhs));
    case Op::Cos: return neg(mul(apply(Op::Sin, n->lhs), derivative(n->lhs)));
    case Op::Tan: return mul(add(constant(1.0), pow(n, 2)), derivative(n->lhs));
  }
  return constant(0.0);
}

}  // namespace holodyn::expr
