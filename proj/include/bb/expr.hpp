#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bb {

enum class Op {
  constant,
  variable,
  // unary
  neg,
  exp,
  log,
  sin,
  cos,
  tan,
  atan,
  sqrt,
  // binary
  add,
  sub,
  mul,
  div,
  pow,
};

enum class NodeKind { constant, variable, unary, binary };

NodeKind kind_of(Op op) noexcept;
int arity(Op op) noexcept;
std::string_view op_name(Op op) noexcept;

/// Expression tree over the single variable x. Value type; children are owned.
struct ExprNode {
  Op op = Op::constant;
  double value = 0.0;  // payload for Op::constant only
  std::vector<ExprNode> children;

  NodeKind kind() const noexcept { return kind_of(op); }

  static ExprNode number(double v);
  static ExprNode var();
  static ExprNode unary(Op op, ExprNode arg);
  static ExprNode binary(Op op, ExprNode lhs, ExprNode rhs);

  bool operator==(const ExprNode&) const = default;
};

/// Recursive-descent parser for
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := ("-")? power
///   power  := atom ("^" factor)?
///   atom   := number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")"
/// Throws ParseError carrying the byte offset of the failure.
ExprNode parse(std::string_view src);

/// Canonical printer: every binary op and negation is parenthesized, constants use
/// 17 significant digits, so parse(render(t)) == t.
std::string render(const ExprNode& node);

/// Checks the arity/finiteness invariants; throws Error on violation.
void validate(const ExprNode& node);

}  // namespace bb
