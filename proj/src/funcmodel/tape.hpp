#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bb/expr.hpp"

namespace bb {

/// Flat post-order program compiled from an ExprNode. Evaluates Taylor coefficients
/// over blocks of points; transcendental leading coefficients go through the SIMD
/// array kernels.
class Tape {
 public:
  static constexpr std::size_t kBlock = 256;

  explicit Tape(const ExprNode& root);

  /// rows[k*xs.size()+i] receives the k-th derivative (not Taylor coefficient) at xs[i].
  void evaluate(std::span<const double> xs, int order, std::span<double> rows) const;

  std::size_t size() const noexcept { return code_.size(); }

 private:
  enum class Code { konst, var, add, sub, mul, div, neg, exp, log, sin, cos, tan, atan, sqrt, powi, powr };

  struct Instr {
    Code code;
    int dst = 0;
    int a = -1;
    int b = -1;
    double c = 0.0;
    int ipow = 0;
    std::string label;
  };

  int emit(const ExprNode& node);
  int push(Instr in);

  template <int K>
  void run(const double* xs, std::size_t n, std::vector<double>& scratch, double* out,
           std::size_t stride) const;

  std::vector<Instr> code_;
  int result_ = 0;
};

}  // namespace bb
