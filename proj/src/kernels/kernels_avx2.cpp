// Compiled with -mavx2 -mfma; only reached through the runtime dispatch in
// kernels_dispatch.cpp after a CPUID check.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace levyenv::kernels::avx2 {
namespace {

// Cephes exp: range reduction by log(2) split in two constants, then a
// (2,3) Pade form on [-ln2/2, ln2/2]. Inputs below the normal range flush
// to zero; inputs above 709 return +inf.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo_bound = _mm256_set1_pd(-708.39641853226408);
  const __m256d hi_bound = _mm256_set1_pd(709.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo_bound, _CMP_LT_OQ);
  const __m256d overflow = _mm256_cmp_pd(x, hi_bound, _CMP_GT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, hi_bound), lo_bound);

  const __m256d fx = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(1.42860682030941723212E-6), x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, x);
  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.00000000000000000009E0));
  __m256d r = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  r = _mm256_fmadd_pd(r, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

  // 2^fx: the biased exponent lands in the low mantissa bits after adding
  // the 1.5 * 2^52 shifter, then moves into the exponent field.
  const __m256d shifter = _mm256_set1_pd(6755399441055744.0);
  const __m256i biased = _mm256_castpd_si256(
      _mm256_add_pd(_mm256_add_pd(fx, _mm256_set1_pd(1023.0)), shifter));
  const __m256d two_n = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
  r = _mm256_mul_pd(r, two_n);

  r = _mm256_andnot_pd(underflow, r);
  r = _mm256_blendv_pd(r, _mm256_set1_pd(std::numeric_limits<double>::infinity()), overflow);
  return r;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double reduce_max(std::span<const double> x) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  for (; i + 4 <= n; i += 4) best = _mm256_max_pd(best, _mm256_loadu_pd(x.data() + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double out = lanes[0];
  for (int k = 1; k < 4; ++k) out = lanes[k] > out ? lanes[k] : out;
  for (; i < n; ++i) out = x[i] > out ? x[i] : out;
  return out;
}

double reduce_min(std::span<const double> x) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  for (; i + 4 <= n; i += 4) best = _mm256_min_pd(best, _mm256_loadu_pd(x.data() + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double out = lanes[0];
  for (int k = 1; k < 4; ++k) out = lanes[k] < out ? lanes[k] : out;
  for (; i < n; ++i) out = x[i] < out ? x[i] : out;
  return out;
}

double sum_exp(std::span<const double> x, double scale, double shift) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d vshift = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d arg = _mm256_fmsub_pd(vs, _mm256_loadu_pd(x.data() + i), vshift);
    acc = _mm256_add_pd(acc, exp_pd(arg));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += std::exp(scale * x[i] - shift);
  return out;
}

void exp_map(std::span<const double> x, double scale, double shift, std::span<double> out) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d vshift = _mm256_set1_pd(shift);
  for (; i + 4 <= n; i += 4) {
    const __m256d arg = _mm256_fmsub_pd(vs, _mm256_loadu_pd(x.data() + i), vshift);
    _mm256_storeu_pd(out.data() + i, exp_pd(arg));
  }
  for (; i < n; ++i) out[i] = std::exp(scale * x[i] - shift);
}

}  // namespace levyenv::kernels::avx2
