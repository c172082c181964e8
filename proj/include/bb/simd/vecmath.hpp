#pragma once

#include <cstddef>
#include <span>

#include "bb/simd/dispatch.hpp"

namespace bb::simd {

// Elementwise transcendental kernels over contiguous arrays. in and out may alias.
// The AVX2 variants use range reduction plus Taylor polynomials and stay within a
// few ulp of the libm results; lanes outside the reduced range (non-finite,
// |x| huge, log of non-positive) go through libm.
struct MathKernels {
  Isa isa;
  void (*exp)(const double* in, double* out, std::size_t n);
  void (*log)(const double* in, double* out, std::size_t n);
  void (*sin)(const double* in, double* out, std::size_t n);
  void (*cos)(const double* in, double* out, std::size_t n);
  void (*sincos)(const double* in, double* s, double* c, std::size_t n);
};

const MathKernels& math_kernels(Isa isa);
inline const MathKernels& math_kernels() { return math_kernels(active_isa()); }

inline void vexp(std::span<const double> in, std::span<double> out) {
  math_kernels().exp(in.data(), out.data(), in.size());
}
inline void vlog(std::span<const double> in, std::span<double> out) {
  math_kernels().log(in.data(), out.data(), in.size());
}
inline void vsin(std::span<const double> in, std::span<double> out) {
  math_kernels().sin(in.data(), out.data(), in.size());
}
inline void vcos(std::span<const double> in, std::span<double> out) {
  math_kernels().cos(in.data(), out.data(), in.size());
}
inline void vsincos(std::span<const double> in, std::span<double> s, std::span<double> c) {
  math_kernels().sincos(in.data(), s.data(), c.data(), in.size());
}

}  // namespace bb::simd
