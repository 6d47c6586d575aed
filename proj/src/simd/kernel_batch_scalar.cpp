#include "dyadkde/simd/kernel_batch.hpp"

namespace dyadkde::simd::detail {

void evaluate_scalar(KernelFamily family, double x, double h, const double* values,
                     double* out, std::size_t count) noexcept {
  const KernelSpec kernel{family, 1.0};
  for (std::size_t k = 0; k < count; ++k) {
    const double u = (x - values[k]) / h;
    out[k] = evaluate(kernel, u) / h;
  }
}

}  // namespace dyadkde::simd::detail
