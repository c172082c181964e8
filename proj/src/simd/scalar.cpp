#include <cmath>

#include "kernels_internal.hpp"

namespace bb::simd::detail {

void exp_scalar(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(in[i]);
}

void log_scalar(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(in[i]);
}

void sin_scalar(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sin(in[i]);
}

void cos_scalar(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::cos(in[i]);
}

void sincos_scalar(const double* in, double* s, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = in[i];
    s[i] = std::sin(v);
    c[i] = std::cos(v);
  }
}

namespace {

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double y) {
    const double t = sum + y;
    if (std::abs(sum) >= std::abs(y)) {
      comp += (sum - t) + y;
    } else {
      comp += (y - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

WindowSum bernstein_window_scalar(const double* log_binom, const double* values, std::size_t count,
                                  double log_binom_mode, double slope, double offset) {
  Neumaier weighted;
  Neumaier total;
  for (std::size_t j = 0; j < count; ++j) {
    const double z = (log_binom[j] - log_binom_mode) + (static_cast<double>(j) + offset) * slope;
    const double w = std::exp(z);
    weighted.add(values[j] * w);
    total.add(w);
  }
  return {weighted.value(), total.value()};
}

MaxAt second_diff_max_scalar(const double* g, std::size_t count, std::size_t step) {
  MaxAt best;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = std::abs((g[i + 2 * step] - 2.0 * g[i + step]) + g[i]);
    if (v > best.value) best = {v, i};
  }
  return best;
}

}  // namespace bb::simd::detail
