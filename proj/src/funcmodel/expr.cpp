#include "bb/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "bb/error.hpp"

namespace bb {

NodeKind kind_of(Op op) noexcept {
  switch (op) {
    case Op::constant:
      return NodeKind::constant;
    case Op::variable:
      return NodeKind::variable;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow:
      return NodeKind::binary;
    default:
      return NodeKind::unary;
  }
}

int arity(Op op) noexcept {
  switch (kind_of(op)) {
    case NodeKind::unary:
      return 1;
    case NodeKind::binary:
      return 2;
    default:
      return 0;
  }
}

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::constant: return "const";
    case Op::variable: return "x";
    case Op::neg: return "-";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::tan: return "tan";
    case Op::atan: return "atan";
    case Op::sqrt: return "sqrt";
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "^";
  }
  return "?";
}

ExprNode ExprNode::number(double v) { return ExprNode{Op::constant, v, {}}; }

ExprNode ExprNode::var() { return ExprNode{Op::variable, 0.0, {}}; }

ExprNode ExprNode::unary(Op op, ExprNode arg) {
  ExprNode n{op, 0.0, {}};
  n.children.push_back(std::move(arg));
  return n;
}

ExprNode ExprNode::binary(Op op, ExprNode lhs, ExprNode rhs) {
  ExprNode n{op, 0.0, {}};
  n.children.reserve(2);
  n.children.push_back(std::move(lhs));
  n.children.push_back(std::move(rhs));
  return n;
}

void validate(const ExprNode& node) {
  if (static_cast<int>(node.children.size()) != arity(node.op)) {
    throw Error("malformed expression tree: '" + std::string(op_name(node.op)) + "' has " +
                std::to_string(node.children.size()) + " children");
  }
  if (node.op == Op::constant && !std::isfinite(node.value)) {
    throw Error("malformed expression tree: non-finite constant");
  }
  for (const auto& c : node.children) validate(c);
}

namespace {

struct FuncEntry {
  std::string_view name;
  Op op;
};

constexpr FuncEntry kFunctions[] = {
    {"exp", Op::exp}, {"log", Op::log},   {"sin", Op::sin},   {"cos", Op::cos},
    {"tan", Op::tan}, {"atan", Op::atan}, {"sqrt", Op::sqrt},
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprNode run() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    ExprNode e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(unexpected(), pos_);
    return e;
  }

 private:
  ExprNode expr() {
    ExprNode lhs = term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = ExprNode::binary(Op::add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = ExprNode::binary(Op::sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  ExprNode term() {
    ExprNode lhs = factor();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = ExprNode::binary(Op::mul, std::move(lhs), factor());
      } else if (accept('/')) {
        lhs = ExprNode::binary(Op::div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  ExprNode factor() {
    skip_ws();
    if (accept('-')) return ExprNode::unary(Op::neg, power());
    return power();
  }

  ExprNode power() {
    ExprNode base = atom();
    skip_ws();
    if (accept('^')) return ExprNode::binary(Op::pow, std::move(base), factor());
    return base;
  }

  ExprNode atom() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("expected expression, found end of input", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      ExprNode inner = expr();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    throw ParseError(unexpected(), pos_);
  }

  ExprNode number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    // An exponent is only consumed when digits follow, so "2e" leaves "e" for the caller.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        digits();
      }
    }
    double v = 0.0;
    const auto* first = src_.data() + start;
    const auto* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ParseError("number out of range", start);
    }
    return ExprNode::number(v);
  }

  ExprNode identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return ExprNode::var();
    if (name == "pi") return ExprNode::number(std::numbers::pi);
    if (name == "e") return ExprNode::number(std::numbers::e);
    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      skip_ws();
      if (!accept('(')) throw ParseError("expected '(' after '" + std::string(name) + "'", pos_);
      ExprNode arg = expr();
      skip_ws();
      int count = 1;
      while (accept(',')) {
        expr();
        skip_ws();
        ++count;
      }
      if (count != 1) {
        throw ParseError("wrong arity: '" + std::string(name) + "' takes 1 argument, got " +
                             std::to_string(count),
                         start);
      }
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return ExprNode::unary(f.op, std::move(arg));
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string unexpected() const {
    return "unexpected character '" + std::string(1, src_[pos_]) + "'";
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExprNode parse(std::string_view src) { return Parser(src).run(); }

std::string render(const ExprNode& node) {
  switch (node.kind()) {
    case NodeKind::constant:
      return format_number(node.value);
    case NodeKind::variable:
      return "x";
    case NodeKind::unary:
      if (node.op == Op::neg) return "(-" + render(node.children[0]) + ")";
      return std::string(op_name(node.op)) + "(" + render(node.children[0]) + ")";
    case NodeKind::binary:
      return "(" + render(node.children[0]) + " " + std::string(op_name(node.op)) + " " +
             render(node.children[1]) + ")";
  }
  return {};
}

}  // namespace bb
