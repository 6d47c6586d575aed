#include <arm_neon.h>

#include "dyadkde/simd/kernel_batch.hpp"

namespace dyadkde::simd::detail {

namespace {

template <KernelFamily Family>
void run(double x, double h, const double* values, double* out, std::size_t count) noexcept {
  const float64x2_t vx = vdupq_n_f64(x);
  const float64x2_t vh = vdupq_n_f64(h);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t three_quarters = vdupq_n_f64(0.75);
  const float64x2_t half = vdupq_n_f64(0.5);

  std::size_t k = 0;
  for (; k + 2 <= count; k += 2) {
    const float64x2_t u = vdivq_f64(vsubq_f64(vx, vld1q_f64(values + k)), vh);
    const float64x2_t a = vabsq_f64(u);
    const uint64x2_t inside = vcleq_f64(a, one);
    float64x2_t kv;
    if constexpr (Family == KernelFamily::Epanechnikov) {
      // separate mul/sub: vmlsq would fuse and break bit-equality with scalar
      kv = vmulq_f64(three_quarters, vsubq_f64(one, vmulq_f64(u, u)));
    } else if constexpr (Family == KernelFamily::Triangular) {
      kv = vsubq_f64(one, a);
    } else {
      kv = half;
    }
    kv = vbslq_f64(inside, kv, zero);
    vst1q_f64(out + k, vdivq_f64(kv, vh));
  }
  if (k < count) evaluate_scalar(Family, x, h, values + k, out + k, count - k);
}

}  // namespace

void evaluate_neon(KernelFamily family, double x, double h, const double* values, double* out,
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
