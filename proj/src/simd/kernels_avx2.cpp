#include "consep/simd/kernels.hpp"

#if CONSEP_HAVE_AVX2

#include <immintrin.h>

namespace consep::simd::detail {

double squared_distance_avx2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a.data() + i);
    const __m256d vb = _mm256_loadu_pd(b.data() + i);
    const __m256d d = _mm256_sub_pd(va, vb);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_add_pd(lo, hi);
  double sum = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::size_t count_ge_avx2(std::span<const double> v, double threshold) {
  const std::size_t n = v.size();
  std::size_t i = 0;
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v.data() + i);
    const __m256d m = _mm256_cmp_pd(x, t, _CMP_GE_OQ);
    count += static_cast<std::size_t>(__builtin_popcount(
        static_cast<unsigned>(_mm256_movemask_pd(m))));
  }
  for (; i < n; ++i) count += (v[i] >= threshold) ? 1 : 0;
  return count;
}

void accumulate_avx2(std::span<double> acc, std::span<const double> x) {
  const std::size_t n = acc.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(acc.data() + i);
    const __m256d vx = _mm256_loadu_pd(x.data() + i);
    _mm256_storeu_pd(acc.data() + i, _mm256_add_pd(va, vx));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

}  // namespace consep::simd::detail

#endif  // CONSEP_HAVE_AVX2
