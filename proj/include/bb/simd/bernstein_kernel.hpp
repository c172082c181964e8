#pragma once

#include <cstddef>

#include "bb/simd/dispatch.hpp"

namespace bb::simd {

struct WindowSum {
  double weighted = 0.0;  // sum of values[j] * w_j
  double total = 0.0;     // sum of w_j
};

// Log-space Bernstein accumulation over a window of basis indices.
// For j in [0, count):
//   z_j = (log_binom[j] - log_binom_mode) + (j + offset) * slope,   w_j = exp(z_j)
// where offset = k_first - k_mode and slope = log(x) - log(1-x). Both sums are
// compensated (Neumaier). Callers keep z_j >= -708 so no term is subnormal.
using WindowSumFn = WindowSum (*)(const double* log_binom, const double* values, std::size_t count,
                                  double log_binom_mode, double slope, double offset);

WindowSumFn bernstein_window_kernel(Isa isa);
inline WindowSumFn bernstein_window_kernel() { return bernstein_window_kernel(active_isa()); }

}  // namespace bb::simd
