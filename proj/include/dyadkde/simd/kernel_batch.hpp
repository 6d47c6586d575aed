#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dyadkde/kernel.hpp"

namespace dyadkde::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend backend) noexcept;

/// Backends compiled into this binary AND supported by the running CPU.
/// Scalar is always first.
std::vector<Backend> available_backends();

/// Backend used by evaluate_batch(). Picks the widest available one unless the
/// environment variable DYADKDE_SIMD names another ("scalar", "avx2", "neon").
Backend active_backend();

/// out[k] = K((x - values[k]) / h) / h.
///
/// Every backend performs the same IEEE operations in the same order as
/// dyadkde::evaluate, so results are bit-identical across backends.
/// Requires out.size() >= values.size().
void evaluate_batch(const KernelSpec& kernel, double x, double h,
                    std::span<const double> values, std::span<double> out);

/// Same as evaluate_batch, on an explicitly chosen backend. The backend must be
/// one of available_backends().
void evaluate_batch(Backend backend, const KernelSpec& kernel, double x, double h,
                    std::span<const double> values, std::span<double> out);

namespace detail {
void evaluate_scalar(KernelFamily family, double x, double h, const double* values,
                     double* out, std::size_t count) noexcept;
#if defined(DYADKDE_HAVE_AVX2)
void evaluate_avx2(KernelFamily family, double x, double h, const double* values,
                   double* out, std::size_t count) noexcept;
#endif
#if defined(DYADKDE_HAVE_NEON)
void evaluate_neon(KernelFamily family, double x, double h, const double* values,
                   double* out, std::size_t count) noexcept;
#endif
}  // namespace detail

}  // namespace dyadkde::simd
