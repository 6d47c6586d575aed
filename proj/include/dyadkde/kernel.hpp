#pragma once

#include <optional>
#include <string_view>

namespace dyadkde {

enum class KernelFamily { Epanechnikov, Triangular, Uniform };

/// Compactly supported, symmetric, second-order kernel on [-1, 1].
struct KernelSpec {
  KernelFamily family = KernelFamily::Epanechnikov;
  double support_radius = 1.0;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// K(u); exactly zero for |u| > support_radius.
double evaluate(const KernelSpec& kernel, double u) noexcept;

/// int u^2 K(u) du
double second_moment(const KernelSpec& kernel) noexcept;

/// int K(u)^2 du
double squared_integral(const KernelSpec& kernel) noexcept;

/// K(0), the kernel's maximum.
double peak(const KernelSpec& kernel) noexcept;

std::string_view kernel_name(KernelFamily family) noexcept;

/// Accepts "epanechnikov", "triangular", "uniform" (case-insensitive).
std::optional<KernelSpec> kernel_from_name(std::string_view name);

}  // namespace dyadkde
