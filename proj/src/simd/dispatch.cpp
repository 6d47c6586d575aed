#include <cassert>
#include <cstdlib>
#include <string>

#include "dyadkde/simd/kernel_batch.hpp"

namespace dyadkde::simd {

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
#if defined(DYADKDE_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) out.push_back(Backend::Avx2);
#endif
#if defined(DYADKDE_HAVE_NEON)
  out.push_back(Backend::Neon);
#endif
  return out;
}

namespace {

Backend select_backend() {
  const auto backends = available_backends();
  if (const char* env = std::getenv("DYADKDE_SIMD"); env != nullptr && *env != '\0') {
    const std::string wanted(env);
    for (auto b : backends) {
      if (backend_name(b) == wanted) return b;
    }
  }
  return backends.back();
}

}  // namespace

Backend active_backend() {
  static const Backend chosen = select_backend();
  return chosen;
}

void evaluate_batch(Backend backend, const KernelSpec& kernel, double x, double h,
                    std::span<const double> values, std::span<double> out) {
  assert(out.size() >= values.size());
  switch (backend) {
#if defined(DYADKDE_HAVE_AVX2)
    case Backend::Avx2:
      detail::evaluate_avx2(kernel.family, x, h, values.data(), out.data(), values.size());
      return;
#endif
#if defined(DYADKDE_HAVE_NEON)
    case Backend::Neon:
      detail::evaluate_neon(kernel.family, x, h, values.data(), out.data(), values.size());
      return;
#endif
    default:
      detail::evaluate_scalar(kernel.family, x, h, values.data(), out.data(), values.size());
      return;
  }
}

void evaluate_batch(const KernelSpec& kernel, double x, double h, std::span<const double> values,
                    std::span<double> out) {
  evaluate_batch(active_backend(), kernel, x, h, values, out);
}

}  // namespace dyadkde::simd
