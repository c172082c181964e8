#pragma once

#include <cstddef>

#include "bb/simd/dispatch.hpp"

namespace bb::simd {

struct MaxAt {
  double value = 0.0;
  std::size_t index = 0;
};

// max over i in [0, count) of |(g[i+2*step] - 2*g[i+step]) + g[i]|, smallest i on ties.
// Every variant evaluates the difference in that order without contraction, so results
// are bitwise identical across variants.
using SecondDiffMaxFn = MaxAt (*)(const double* g, std::size_t count, std::size_t step);

SecondDiffMaxFn second_diff_max_kernel(Isa isa);
inline SecondDiffMaxFn second_diff_max_kernel() { return second_diff_max_kernel(active_isa()); }

}  // namespace bb::simd
