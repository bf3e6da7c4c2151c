#include "v2g/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace v2g::kernels::detail {

void linear_best_response_avx2(double price, const double* eta,
                               const double* a_max, double* out,
                               std::size_t n) {
  const __m256d vp = _mm256_set1_pd(price);
  const __m256d vz = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ve = _mm256_loadu_pd(eta + i);
    const __m256d va = _mm256_loadu_pd(a_max + i);
    const __m256d mask = _mm256_cmp_pd(ve, vp, _CMP_LT_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(vz, va, mask));
  }
  for (; i < n; ++i) {
    out[i] = (eta[i] < price) ? a_max[i] : 0.0;
  }
}

void quadratic_best_response_avx2(double price, const double* eta,
                                  const double* upsilon, const double* a_max,
                                  double* out, std::size_t n) {
  const __m256d vp = _mm256_set1_pd(price);
  const __m256d vz = _mm256_setzero_pd();
  const __m256d v2 = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ve = _mm256_loadu_pd(eta + i);
    const __m256d vu = _mm256_loadu_pd(upsilon + i);
    const __m256d va = _mm256_loadu_pd(a_max + i);
    const __m256d t = _mm256_div_pd(_mm256_sub_pd(vp, ve), _mm256_mul_pd(v2, vu));
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(t, vz), va));
  }
  for (; i < n; ++i) {
    const double t = (price - eta[i]) / (2.0 * upsilon[i]);
    out[i] = t < 0.0 ? 0.0 : (t > a_max[i] ? a_max[i] : t);
  }
}

}  // namespace v2g::kernels::detail

#endif
