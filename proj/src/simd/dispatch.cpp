#include "bb/simd/dispatch.hpp"

#include <cstdlib>
#include <string>

#include "bb/error.hpp"
#include "bb/simd/bernstein_kernel.hpp"
#include "bb/simd/difference_kernel.hpp"
#include "bb/simd/vecmath.hpp"
#include "kernels_internal.hpp"

namespace bb::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(BB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

namespace {

Isa select_isa() noexcept {
  if (const char* env = std::getenv("BB_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

constexpr MathKernels kScalarMath{Isa::scalar, detail::exp_scalar, detail::log_scalar, detail::sin_scalar,
                                  detail::cos_scalar, detail::sincos_scalar};
#if defined(BB_HAVE_AVX2)
constexpr MathKernels kAvx2Math{Isa::avx2, detail::exp_avx2, detail::log_avx2, detail::sin_avx2,
                                detail::cos_avx2, detail::sincos_avx2};
#endif

void require(Isa isa) {
  if (!isa_available(isa)) throw Error("SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
}

}  // namespace

Isa active_isa() noexcept {
  static const Isa isa = select_isa();
  return isa;
}

const MathKernels& math_kernels(Isa isa) {
  require(isa);
#if defined(BB_HAVE_AVX2)
  if (isa == Isa::avx2) return kAvx2Math;
#endif
  return kScalarMath;
}

WindowSumFn bernstein_window_kernel(Isa isa) {
  require(isa);
#if defined(BB_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::bernstein_window_avx2;
#endif
  return detail::bernstein_window_scalar;
}

SecondDiffMaxFn second_diff_max_kernel(Isa isa) {
  require(isa);
#if defined(BB_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::second_diff_max_avx2;
#endif
  return detail::second_diff_max_scalar;
}

}  // namespace bb::simd
