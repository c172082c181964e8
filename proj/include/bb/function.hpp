#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bb/expr.hpp"

namespace bb {

/// Highest derivative order the evaluator produces.
inline constexpr int kMaxOrder = 4;

/// Value and derivatives 0..4 of a function at one point. Entries above the requested
/// order are zero.
struct Jet {
  std::array<double, kMaxOrder + 1> d{};

  double operator[](int k) const { return d[static_cast<std::size_t>(k)]; }
};

class Tape;

/// Forward-mode evaluation of body at x up to `order` derivatives (Taylor arithmetic).
/// Throws DomainError naming the offending subexpression on a non-finite intermediate.
Jet eval_jet(const ExprNode& body, double x, int order);

/// A named function on [0,1] with a guaranteed derivative order.
///
/// Construction compiles the tree and evaluates it on a 257-point probe grid of [0,1];
/// every derivative up to max_order must be finite there. Copies share the compiled
/// program, which is immutable, so concurrent evaluation is safe.
class FunctionSpec {
 public:
  static constexpr int kProbePoints = 257;

  FunctionSpec(std::string name, ExprNode body, int max_order);

  /// Parses src. Without max_order, uses the largest order (<= 4) whose jets are
  /// finite on the probe grid.
  static FunctionSpec from_text(std::string name, std::string_view src,
                                std::optional<int> max_order = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const ExprNode& body() const noexcept { return body_; }
  int max_order() const noexcept { return max_order_; }
  std::string expression() const { return render(body_); }

  double value(double x) const;
  double derivative(double x, int k) const;
  Jet jet(double x, int order) const;

  /// Batched evaluation. rows has (order+1)*xs.size() entries; rows[k*xs.size()+i] is
  /// the k-th derivative at xs[i].
  void evaluate(std::span<const double> xs, int order, std::span<double> rows) const;
  void values(std::span<const double> xs, std::span<double> out) const;
  void derivatives(std::span<const double> xs, int k, std::span<double> out) const;

  /// True when f'' vanishes on the probe grid (f is a polynomial of degree <= 1).
  bool is_affine() const;

 private:
  void require_order(int order) const;

  std::string name_;
  ExprNode body_;
  int max_order_ = 0;
  std::shared_ptr<const Tape> tape_;
};

/// Reference functions: x, x^2, x^3, exp, sin, cos, atan, 1/(1+x^2) and the affine 1+0.5x.
std::vector<FunctionSpec> builtin_corpus();

std::optional<FunctionSpec> find_builtin(std::string_view name);

/// Uniform grid of n points on [a,b] with exact endpoints.
std::vector<double> uniform_grid(double a, double b, std::size_t n);

}  // namespace bb
