#include "bb/bernstein.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bb/error.hpp"
#include "bb/simd/bernstein_kernel.hpp"

namespace bb {
namespace {

// Centred log-weights below this underflow in exp(); those terms contribute nothing.
constexpr double kLogWeightFloor = -708.0;

void require_degree(int n) {
  if (n < 1) throw Error("Bernstein degree must be >= 1, got " + std::to_string(n));
}

}  // namespace

SampleVector sample(const FunctionSpec& f, int n) {
  require_degree(n);
  std::vector<double> xs(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) xs[static_cast<std::size_t>(k)] = static_cast<double>(k) / n;
  SampleVector s{n, std::vector<double>(xs.size())};
  f.values(xs, s.values);
  return s;
}

double de_casteljau(const SampleVector& s, double x) {
  std::vector<double> b(s.values);
  const double y = 1.0 - x;
  for (int r = 1; r <= s.n; ++r) {
    for (int k = 0; k + r <= s.n; ++k) {
      b[static_cast<std::size_t>(k)] = y * b[static_cast<std::size_t>(k)] + x * b[static_cast<std::size_t>(k) + 1];
    }
  }
  return b[0];
}

BernsteinOperator::BernsteinOperator(SampleVector samples) : samples_(std::move(samples)) {
  require_degree(samples_.n);
  if (samples_.values.size() != static_cast<std::size_t>(samples_.n) + 1) {
    throw Error("sample vector length must be n+1");
  }
  for (double v : samples_.values) {
    if (!std::isfinite(v)) throw Error("non-finite Bernstein sample");
  }
  const int n = samples_.n;
  log_binom_.resize(static_cast<std::size_t>(n) + 1);
  const double top = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) {
    log_binom_[static_cast<std::size_t>(k)] = top - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  }
}

BernsteinOperator::BernsteinOperator(const FunctionSpec& f, int n) : BernsteinOperator(sample(f, n)) {}

double BernsteinOperator::operator()(double x) const {
  if (x <= 0.0) return samples_.values.front();
  if (x >= 1.0) return samples_.values.back();
  if (samples_.n <= kDeCasteljauMax) {
    std::array<double, kDeCasteljauMax + 1> b{};
    std::copy(samples_.values.begin(), samples_.values.end(), b.begin());
    const double y = 1.0 - x;
    for (int r = 1; r <= samples_.n; ++r) {
      for (int k = 0; k + r <= samples_.n; ++k) b[k] = y * b[k] + x * b[k + 1];
    }
    return b[0];
  }
  return evaluate_logspace(x, simd::active_isa());
}

void BernsteinOperator::evaluate(std::span<const double> xs, std::span<double> out) const {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
}

double BernsteinOperator::evaluate_logspace(double x, simd::Isa isa) const {
  if (x <= 0.0) return samples_.values.front();
  if (x >= 1.0) return samples_.values.back();
  const int n = samples_.n;
  const double slope = std::log(x) - std::log1p(-x);
  const int mode = std::clamp(static_cast<int>(std::floor((n + 1) * x)), 0, n);
  const double lb_mode = log_binom_[static_cast<std::size_t>(mode)];
  auto z = [&](int k) { return (log_binom_[static_cast<std::size_t>(k)] - lb_mode) + (k - mode) * slope; };

  // z is concave in k with its maximum at the mode; bisect for the window edges.
  int left = 0;
  if (z(0) < kLogWeightFloor) {
    int lo = 0;  // below floor
    int hi = mode;
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (z(mid) < kLogWeightFloor ? lo : hi) = mid;
    }
    left = hi;
  }
  int right = n;
  if (z(n) < kLogWeightFloor) {
    int lo = mode;
    int hi = n;  // below floor
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (z(mid) < kLogWeightFloor ? hi : lo) = mid;
    }
    right = lo;
  }

  const auto kernel = simd::bernstein_window_kernel(isa);
  const auto sum = kernel(log_binom_.data() + left, samples_.values.data() + left,
                          static_cast<std::size_t>(right - left + 1), lb_mode, slope,
                          static_cast<double>(left - mode));
  return sum.weighted / sum.total;
}

double bernstein_eval(const SampleVector& s, double x) {
  if (s.n <= BernsteinOperator::kDeCasteljauMax) {
    if (x <= 0.0) return s.values.front();
    if (x >= 1.0) return s.values.back();
    return de_casteljau(s, x);
  }
  return BernsteinOperator(s)(x);
}

NormEstimate approx_error_norm(const FunctionSpec& f, int n, const GridConfig& cfg) {
  const BernsteinOperator op(f, n);
  std::vector<double> fx;
  std::vector<double> bx;
  auto objective = [&](std::span<const double> xs, std::span<double> out) {
    fx.resize(xs.size());
    bx.resize(xs.size());
    f.values(xs, fx);
    op.evaluate(xs, bx);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::abs(fx[i] - bx[i]);
  };
  return maximize_on_interval(objective, 0.0, 1.0, cfg.grid_points, cfg.refine_rounds);
}

double voronovskaja_residual(const FunctionSpec& f, int n, double x) {
  const BernsteinOperator op(f, n);
  const Jet j = f.jet(x, 2);
  return op(x) - j[0] - x * (1.0 - x) * j[2] / (2.0 * n);
}

NormEstimate voronovskaja_residual_norm(const FunctionSpec& f, int n, const GridConfig& cfg) {
  if (f.max_order() < 2) {
    throw HypothesisError("Voronovskaja residual needs f'' but '" + f.name() + "' has max_order " +
                          std::to_string(f.max_order()));
  }
  const BernsteinOperator op(f, n);
  std::vector<double> rows;
  std::vector<double> bx;
  auto objective = [&](std::span<const double> xs, std::span<double> out) {
    const std::size_t m = xs.size();
    rows.resize(3 * m);
    bx.resize(m);
    f.evaluate(xs, 2, rows);
    op.evaluate(xs, bx);
    for (std::size_t i = 0; i < m; ++i) {
      const double x = xs[i];
      out[i] = std::abs(bx[i] - rows[i] - x * (1.0 - x) * rows[2 * m + i] / (2.0 * n));
    }
  };
  return maximize_on_interval(objective, 0.0, 1.0, cfg.grid_points, cfg.refine_rounds);
}

}  // namespace bb
