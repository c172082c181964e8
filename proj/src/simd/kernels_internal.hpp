#pragma once

// Per-ISA entry points. Only the dispatch table refers to these.

#include <cstddef>

#include "bb/simd/bernstein_kernel.hpp"
#include "bb/simd/difference_kernel.hpp"

namespace bb::simd::detail {

void exp_scalar(const double* in, double* out, std::size_t n);
void log_scalar(const double* in, double* out, std::size_t n);
void sin_scalar(const double* in, double* out, std::size_t n);
void cos_scalar(const double* in, double* out, std::size_t n);
void sincos_scalar(const double* in, double* s, double* c, std::size_t n);
WindowSum bernstein_window_scalar(const double* log_binom, const double* values, std::size_t count,
                                  double log_binom_mode, double slope, double offset);
MaxAt second_diff_max_scalar(const double* g, std::size_t count, std::size_t step);

#if defined(BB_HAVE_AVX2)
void exp_avx2(const double* in, double* out, std::size_t n);
void log_avx2(const double* in, double* out, std::size_t n);
void sin_avx2(const double* in, double* out, std::size_t n);
void cos_avx2(const double* in, double* out, std::size_t n);
void sincos_avx2(const double* in, double* s, double* c, std::size_t n);
WindowSum bernstein_window_avx2(const double* log_binom, const double* values, std::size_t count,
                                double log_binom_mode, double slope, double offset);
MaxAt second_diff_max_avx2(const double* g, std::size_t count, std::size_t step);
#endif

}  // namespace bb::simd::detail
