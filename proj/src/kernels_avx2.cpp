// AVX2 + FMA variants of the numeric kernels.  This translation unit is the
// only one compiled with -mavx2 -mfma; callers reach it through the runtime
// dispatch in kernels.cpp, so no AVX2 instruction executes unless the CPU
// reports support.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "zid/kernels.hpp"

namespace zid::kernels::avx2 {

namespace {

double hsum256(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
  return _mm_cvtsd_f64(s1);
}

double hmax256(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m2 = _mm_max_pd(lo, hi);
  const __m128d m1 = _mm_max_sd(m2, _mm_unpackhi_pd(m2, m2));
  return _mm_cvtsd_f64(m1);
}

}  // namespace

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double total = hsum256(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double total = hsum256(acc);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  double best = hmax256(acc);
  for (; i < n; ++i) {
    const double d = std::fabs(x[i] - y[i]);
    if (d > best) best = d;
  }
  return best;
}

void matvec(const double* a, const double* x, double* y, std::size_t rows,
            std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot(a + r * cols, x, cols);
  }
}

}  // namespace zid::kernels::avx2

#endif  // x86-64
