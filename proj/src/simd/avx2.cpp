// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and is
// only entered through the dispatch table after a CPU feature check.

#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstdint>

#include "kernels_internal.hpp"

namespace bb::simd::detail {
namespace {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// ln2 split so that k*kLn2Hi is exact for |k| < 2^20.
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.4426950408889634074;

// pi/2 in three 33-bit pieces.
constexpr double kPio2_1 = 1.57079632673412561417e+00;
constexpr double kPio2_2 = 6.07710050630396597660e-11;
constexpr double kPio2_3 = 2.02226624871116645580e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

constexpr double kExpMin = -708.0;
constexpr double kExpMax = 709.0;
constexpr double kTrigMax = 1.0e5;

inline __m256i int32x4_to_int64x4(__m256d integral) {
  return _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(integral));
}

// exp(x) for x in [kExpMin, kExpMax].
inline __m256d exp_core(__m256d x) {
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, set1(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, set1(kLn2Hi), x);
  r = _mm256_fnmadd_pd(k, set1(kLn2Lo), r);

  // Taylor series to degree 13; |r| <= ln2/2 so the truncation error is below 1e-17.
  __m256d p = set1(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, set1(0.5));
  p = _mm256_fmadd_pd(p, r, set1(1.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0));

  const __m256i biased = _mm256_add_epi64(int32x4_to_int64x4(k), _mm256_set1_epi64x(1023));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
  return _mm256_mul_pd(p, scale);
}

// log(x) for positive, normal, finite x.
inline __m256d log_core(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  const __m256i mant_bits = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                            _mm256_set1_epi64x(0x3FF0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);

  // Move m into [sqrt(1/2), sqrt(2)).
  const __m256d big = _mm256_cmp_pd(m, set1(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), big);
  e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));

  // Exponent to double: (e + 1024) is nonnegative and small, so the 2^52 trick applies.
  const __m256i shifted = _mm256_or_si256(_mm256_add_epi64(e, _mm256_set1_epi64x(1024)),
                                          _mm256_set1_epi64x(0x4330000000000000LL));
  const __m256d ed = _mm256_sub_pd(_mm256_castsi256_pd(shifted), set1(4503599627370496.0 + 1024.0));

  // log(m) = 2 atanh(s), s = (m-1)/(m+1), |s| <= 0.1716.
  const __m256d f = _mm256_sub_pd(m, set1(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(set1(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d p = set1(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, z, set1(1.0 / 3.0));
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d log_m = _mm256_fmadd_pd(_mm256_mul_pd(two_s, z), p, two_s);

  const __m256d lo = _mm256_fmadd_pd(ed, set1(kLn2Lo), log_m);
  return _mm256_fmadd_pd(ed, set1(kLn2Hi), lo);
}

// sin and cos for |x| <= kTrigMax.
inline void sincos_core(__m256d x, __m256d& sin_out, __m256d& cos_out) {
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, set1(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, set1(kPio2_1), x);
  r = _mm256_fnmadd_pd(k, set1(kPio2_2), r);
  r = _mm256_fnmadd_pd(k, set1(kPio2_3), r);
  const __m256d z = _mm256_mul_pd(r, r);

  // sin r = r + r z S(z), Taylor to r^17.
  __m256d sp = set1(1.0 / 355687428096000.0);
  sp = _mm256_fmadd_pd(sp, z, set1(-1.0 / 1307674368000.0));
  sp = _mm256_fmadd_pd(sp, z, set1(1.0 / 6227020800.0));
  sp = _mm256_fmadd_pd(sp, z, set1(-1.0 / 39916800.0));
  sp = _mm256_fmadd_pd(sp, z, set1(1.0 / 362880.0));
  sp = _mm256_fmadd_pd(sp, z, set1(-1.0 / 5040.0));
  sp = _mm256_fmadd_pd(sp, z, set1(1.0 / 120.0));
  sp = _mm256_fmadd_pd(sp, z, set1(-1.0 / 6.0));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), sp, r);

  // cos r = 1 - z/2 + z^2 C(z), Taylor to r^18; the 1 - z/2 step keeps its rounding error.
  __m256d cp = set1(-1.0 / 6402373705728000.0);
  cp = _mm256_fmadd_pd(cp, z, set1(1.0 / 20922789888000.0));
  cp = _mm256_fmadd_pd(cp, z, set1(-1.0 / 87178291200.0));
  cp = _mm256_fmadd_pd(cp, z, set1(1.0 / 479001600.0));
  cp = _mm256_fmadd_pd(cp, z, set1(-1.0 / 3628800.0));
  cp = _mm256_fmadd_pd(cp, z, set1(1.0 / 40320.0));
  cp = _mm256_fmadd_pd(cp, z, set1(-1.0 / 720.0));
  cp = _mm256_fmadd_pd(cp, z, set1(1.0 / 24.0));
  const __m256d hz = _mm256_mul_pd(z, set1(0.5));
  const __m256d w = _mm256_sub_pd(set1(1.0), hz);
  const __m256d w_err = _mm256_sub_pd(_mm256_sub_pd(set1(1.0), w), hz);
  const __m256d cos_r = _mm256_add_pd(w, _mm256_fmadd_pd(_mm256_mul_pd(z, z), cp, w_err));

  const __m256i q = _mm256_and_si256(int32x4_to_int64x4(k), _mm256_set1_epi64x(3));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d sin_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));
  const __m256i q1 = _mm256_add_epi64(q, one);
  const __m256d cos_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q1, two), two));
  const __m256d sign = set1(-0.0);

  const __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap);
  const __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap);
  sin_out = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign));
  cos_out = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign));
}

inline bool all_lanes(__m256d mask) { return _mm256_movemask_pd(mask) == 0xF; }

inline bool exp_range(__m256d x) {
  const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(x, set1(kExpMin), _CMP_GE_OQ),
                                   _mm256_cmp_pd(x, set1(kExpMax), _CMP_LE_OQ));
  return all_lanes(ok);
}

inline bool log_range(__m256d x) {
  const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(x, set1(DBL_MIN), _CMP_GE_OQ),
                                   _mm256_cmp_pd(x, set1(DBL_MAX), _CMP_LE_OQ));
  return all_lanes(ok);
}

inline bool trig_range(__m256d x) {
  const __m256d ax = _mm256_andnot_pd(set1(-0.0), x);
  return all_lanes(_mm256_cmp_pd(ax, set1(kTrigMax), _CMP_LE_OQ));
}

// Runs `vec` on full blocks of four; the tail is padded into a local block so every
// element sees the same algorithm. Blocks failing `in_range` fall back to `scalar`.
template <class InRange, class Vec, class Scalar>
void unary_map(const double* in, double* out, std::size_t n, InRange in_range, Vec vec, Scalar scalar,
               double pad) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    if (in_range(x)) {
      _mm256_storeu_pd(out + i, vec(x));
    } else {
      for (std::size_t j = i; j < i + 4; ++j) out[j] = scalar(in[j]);
    }
  }
  if (i < n) {
    alignas(32) double buf[4] = {pad, pad, pad, pad};
    for (std::size_t j = i; j < n; ++j) buf[j - i] = in[j];
    const __m256d x = _mm256_load_pd(buf);
    if (in_range(x)) {
      _mm256_store_pd(buf, vec(x));
      for (std::size_t j = i; j < n; ++j) out[j] = buf[j - i];
    } else {
      for (std::size_t j = i; j < n; ++j) out[j] = scalar(in[j]);
    }
  }
}

}  // namespace

void exp_avx2(const double* in, double* out, std::size_t n) {
  unary_map(in, out, n, exp_range, exp_core, [](double v) { return std::exp(v); }, 0.0);
}

void log_avx2(const double* in, double* out, std::size_t n) {
  unary_map(in, out, n, log_range, log_core, [](double v) { return std::log(v); }, 1.0);
}

void sin_avx2(const double* in, double* out, std::size_t n) {
  unary_map(
      in, out, n, trig_range,
      [](__m256d x) {
        __m256d s, c;
        sincos_core(x, s, c);
        return s;
      },
      [](double v) { return std::sin(v); }, 0.0);
}

void cos_avx2(const double* in, double* out, std::size_t n) {
  unary_map(
      in, out, n, trig_range,
      [](__m256d x) {
        __m256d s, c;
        sincos_core(x, s, c);
        return c;
      },
      [](double v) { return std::cos(v); }, 0.0);
}

void sincos_avx2(const double* in, double* s, double* c, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    if (trig_range(x)) {
      __m256d vs, vc;
      sincos_core(x, vs, vc);
      _mm256_storeu_pd(s + i, vs);
      _mm256_storeu_pd(c + i, vc);
    } else {
      for (std::size_t j = i; j < i + 4; ++j) {
        const double v = in[j];
        s[j] = std::sin(v);
        c[j] = std::cos(v);
      }
    }
  }
  if (i < n) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = i; j < n; ++j) buf[j - i] = in[j];
    const __m256d x = _mm256_load_pd(buf);
    if (trig_range(x)) {
      alignas(32) double bs[4], bc[4];
      __m256d vs, vc;
      sincos_core(x, vs, vc);
      _mm256_store_pd(bs, vs);
      _mm256_store_pd(bc, vc);
      for (std::size_t j = i; j < n; ++j) {
        s[j] = bs[j - i];
        c[j] = bc[j - i];
      }
    } else {
      for (std::size_t j = i; j < n; ++j) {
        s[j] = std::sin(in[j]);
        c[j] = std::cos(in[j]);
      }
    }
  }
}

namespace {

struct LaneNeumaier {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  void add(__m256d y) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
    const __m256d t = _mm256_add_pd(sum, y);
    const __m256d sum_big =
        _mm256_cmp_pd(_mm256_and_pd(sum, abs_mask), _mm256_and_pd(y, abs_mask), _CMP_GE_OQ);
    const __m256d a = _mm256_add_pd(_mm256_sub_pd(sum, t), y);
    const __m256d b = _mm256_add_pd(_mm256_sub_pd(y, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(b, a, sum_big));
    sum = t;
  }
};

struct ScalarNeumaier {
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
};

double reduce(const LaneNeumaier& acc, ScalarNeumaier tail) {
  alignas(32) double s[4], c[4];
  _mm256_store_pd(s, acc.sum);
  _mm256_store_pd(c, acc.comp);
  for (double v : s) tail.add(v);
  return tail.sum + (tail.comp + ((c[0] + c[1]) + (c[2] + c[3])));
}

}  // namespace

WindowSum bernstein_window_avx2(const double* log_binom, const double* values, std::size_t count,
                                double log_binom_mode, double slope, double offset) {
  LaneNeumaier weighted;
  LaneNeumaier total;
  const __m256d mode = set1(log_binom_mode);
  const __m256d vslope = set1(slope);
  __m256d idx = _mm256_add_pd(set1(offset), _mm256_set_pd(3.0, 2.0, 1.0, 0.0));
  const __m256d step = set1(4.0);
  const __m256d lo = set1(kExpMin);
  const __m256d hi = set1(kExpMax);

  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    // No FMA here: z must round exactly like the scalar reference.
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(log_binom + j), mode);
    __m256d z = _mm256_add_pd(diff, _mm256_mul_pd(idx, vslope));
    z = _mm256_min_pd(_mm256_max_pd(z, lo), hi);
    const __m256d w = exp_core(z);
    weighted.add(_mm256_mul_pd(_mm256_loadu_pd(values + j), w));
    total.add(w);
    idx = _mm256_add_pd(idx, step);
  }

  ScalarNeumaier weighted_tail;
  ScalarNeumaier total_tail;
  for (; j < count; ++j) {
    const double z = (log_binom[j] - log_binom_mode) + (static_cast<double>(j) + offset) * slope;
    const double w = std::exp(z);
    weighted_tail.add(values[j] * w);
    total_tail.add(w);
  }
  return {reduce(weighted, weighted_tail), reduce(total, total_tail)};
}

MaxAt second_diff_max_avx2(const double* g, std::size_t count, std::size_t step) {
  const __m256d sign_mask = set1(-0.0);
  const __m256d two = set1(2.0);
  __m256d best = _mm256_setzero_pd();
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = set1(4.0);
  const double* mid = g + step;
  const double* far = g + 2 * step;

  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(far + i), _mm256_mul_pd(two, _mm256_loadu_pd(mid + i)));
    const __m256d v = _mm256_andnot_pd(sign_mask, _mm256_add_pd(t, _mm256_loadu_pd(g + i)));
    const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, v, gt);
    best_idx = _mm256_blendv_pd(best_idx, idx, gt);
    idx = _mm256_add_pd(idx, four);
  }

  alignas(32) double lane_val[4];
  alignas(32) double lane_idx[4];
  _mm256_store_pd(lane_val, best);
  _mm256_store_pd(lane_idx, best_idx);
  MaxAt out;
  for (int l = 0; l < 4; ++l) {
    const auto li = static_cast<std::size_t>(lane_idx[l]);
    if (lane_val[l] > out.value || (lane_val[l] == out.value && lane_val[l] > 0.0 && li < out.index)) {
      out = {lane_val[l], li};
    }
  }
  for (; i < count; ++i) {
    const double v = std::abs((far[i] - 2.0 * mid[i]) + g[i]);
    if (v > out.value) out = {v, i};
  }
  return out;
}

}  // namespace bb::simd::detail
