// Expression trees over z, complex literals, + - * /, integer powers and
// exp/sin/cos/tan. Nodes are immutable and shared.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "holodyn/core.hpp"

namespace holodyn::expr {

enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Tan };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  Complex value{};   // Const
  int exponent = 0;  // Pow
  NodePtr lhs;       // unary operand / left operand
  NodePtr rhs;       // right operand
};

bool is_function(Op op);
const char* function_name(Op op);

// Builders. All fold constant subexpressions and the identities
// 0+x, x*1, x^1, x^0, -(-x).
NodePtr constant(Complex c);
NodePtr variable();
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr neg(NodePtr a);
NodePtr pow(NodePtr a, int n);
NodePtr apply(Op fn, NodePtr a);

bool is_constant(const NodePtr& n);
bool is_constant_value(const NodePtr& n, Complex c);
/// True when the subtree does not mention z.
bool is_z_free(const NodePtr& n);

/// Plain recursive evaluation with IEEE semantics and no pole handling.
Complex evaluate(const Node& n, Complex z);

/// Parse text following the expression grammar documented in README.md.
/// Throws SyntaxError or UnsupportedFunction.
NodePtr parse(std::string_view text);

/// Serialize in the same grammar; parse(serialize(n)) rebuilds an identical tree.
std::string serialize(const NodePtr& n);

/// Symbolic derivative with respect to z.
NodePtr derivative(const NodePtr& n);

/// Number of nodes in the tree.
std::size_t size(const NodePtr& n);

}  // namespace holodyn::expr
