#include "hilbmap/kernels.hpp"

#if defined(HILBMAP_HAVE_AVX2_TU)
#include <immintrin.h>
#endif

namespace hilbmap::simd {

#if defined(HILBMAP_HAVE_AVX2_TU)
namespace {

inline double fold(__m256d lo, __m256d hi) {
  const __m256d t = _mm256_add_pd(lo, hi);  // (l0+l4, l1+l5, l2+l6, l3+l7)
  const __m128d a = _mm256_castpd256_pd128(t);
  const __m128d b = _mm256_extractf128_pd(t, 1);
  const __m128d u = _mm_add_pd(a, b);  // (t0+t2, t1+t3)
  return _mm_cvtsd_f64(u) + _mm_cvtsd_f64(_mm_unpackhi_pd(u, u));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  const std::size_t blocks = n / 8 * 8;
  for (std::size_t i = 0; i < blocks; i += 8) {
    lo = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), lo);
    hi = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), hi);
  }
  double s = fold(lo, hi);
  for (std::size_t i = blocks; i < n; ++i) s = __builtin_fma(a[i], b[i], s);
  return s;
}

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  const std::size_t blocks = n / 8 * 8;
  for (std::size_t i = 0; i < blocks; i += 8) {
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    lo = _mm256_fmadd_pd(p0, _mm256_loadu_pd(c + i), lo);
    hi = _mm256_fmadd_pd(p1, _mm256_loadu_pd(c + i + 4), hi);
  }
  double s = fold(lo, hi);
  for (std::size_t i = blocks; i < n; ++i) s = __builtin_fma(a[i] * b[i], c[i], s);
  return s;
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::avx2, &dot_avx2, &dot3_avx2};
  return table;
}

#else

const KernelTable& avx2_kernels() { return scalar_kernels(); }

#endif

}  // namespace hilbmap::simd
