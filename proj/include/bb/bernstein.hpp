#pragma once

#include <span>
#include <vector>

#include "bb/function.hpp"
#include "bb/grid.hpp"
#include "bb/simd/dispatch.hpp"

namespace bb {

/// f(k/n) for k = 0..n.
struct SampleVector {
  int n = 0;
  std::vector<double> values;
};

SampleVector sample(const FunctionSpec& f, int n);

/// Exact de Casteljau recursion, O(n^2). Reference evaluator.
double de_casteljau(const SampleVector& s, double x);

/// B_n f(x) = sum_k values[k] C(n,k) x^k (1-x)^(n-k).
///
/// Degrees up to kDeCasteljauMax use the de Casteljau recursion. Above that the basis
/// weights are formed in log space from a log-gamma table, centred on the mode
/// k* = floor((n+1)x), and accumulated with compensated sums over the window where
/// the weight exceeds exp(-708) relative to the mode. The weighted sum is divided by
/// the sum of the same weights, which is 1 in exact arithmetic.
class BernsteinOperator {
 public:
  static constexpr int kDeCasteljauMax = 64;

  explicit BernsteinOperator(SampleVector samples);
  BernsteinOperator(const FunctionSpec& f, int n);

  int degree() const noexcept { return samples_.n; }
  const SampleVector& samples() const noexcept { return samples_; }

  double operator()(double x) const;
  void evaluate(std::span<const double> xs, std::span<double> out) const;

  /// Log-space path regardless of degree, on a specific kernel variant.
  double evaluate_logspace(double x, simd::Isa isa) const;

 private:
  SampleVector samples_;
  std::vector<double> log_binom_;
};

double bernstein_eval(const SampleVector& s, double x);

/// sup_x |f(x) - B_n f(x)|.
NormEstimate approx_error_norm(const FunctionSpec& f, int n, const GridConfig& cfg);

/// B_n f(x) - f(x) - x(1-x) f''(x) / (2n).
double voronovskaja_residual(const FunctionSpec& f, int n, double x);

NormEstimate voronovskaja_residual_norm(const FunctionSpec& f, int n, const GridConfig& cfg);

}  // namespace bb
