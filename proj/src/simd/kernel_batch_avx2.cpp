#include <immintrin.h>

#include "dyadkde/simd/kernel_batch.hpp"

namespace dyadkde::simd::detail {

namespace {

template <KernelFamily Family>
void run(double x, double h, const double* values, double* out, std::size_t count) noexcept {
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vh = _mm256_set1_pd(h);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d three_quarters = _mm256_set1_pd(0.75);
  const __m256d half = _mm256_set1_pd(0.5);

  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d u = _mm256_div_pd(_mm256_sub_pd(vx, _mm256_loadu_pd(values + k)), vh);
    const __m256d a = _mm256_andnot_pd(sign, u);
    // ordered compare: NaN lanes fall outside the support like the scalar path
    const __m256d inside = _mm256_cmp_pd(a, one, _CMP_LE_OQ);
    __m256d kv;
    if constexpr (Family == KernelFamily::Epanechnikov) {
      kv = _mm256_mul_pd(three_quarters, _mm256_sub_pd(one, _mm256_mul_pd(u, u)));
    } else if constexpr (Family == KernelFamily::Triangular) {
      kv = _mm256_sub_pd(one, a);
    } else {
      kv = half;
    }
    kv = _mm256_blendv_pd(zero, kv, inside);
    _mm256_storeu_pd(out + k, _mm256_div_pd(kv, vh));
  }
  if (k < count) evaluate_scalar(Family, x, h, values + k, out + k, count - k);
}

}  // namespace

void evaluate_avx2(KernelFamily family, double x, double h, const double* values, double* out,
                   std::size_t count) noexcept {
  switch (family) {
    case KernelFamily::Epanechnikov:
      run<KernelFamily::Epanechnikov>(x, h, values, out, count);
      break;
    case KernelFamily::Triangular:
      run<KernelFamily::Triangular>(x, h, values, out, count);
      break;
    case KernelFamily::Uniform:
      run<KernelFamily::Uniform>(x, h, values, out, count);
      break;
  }
}

}  // namespace dyadkde::simd::detail
