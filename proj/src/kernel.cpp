#include "dyadkde/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "dyadkde/errors.hpp"

namespace dyadkde {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::NonPositiveBandwidth: return "NonPositiveBandwidth";
    case ErrorKind::EmptyNetwork: return "EmptyNetwork";
    case ErrorKind::IncompleteSampleRequiresIncompletePath:
      return "IncompleteSampleRequiresIncompletePath";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::ZeroSpreadSample: return "ZeroSpreadSample";
    case ErrorKind::NonPositiveModifiedVariance: return "NonPositiveModifiedVariance";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// The batch kernels in src/simd/ repeat these formulas operation for operation;
// keep them in sync.
double evaluate(const KernelSpec& kernel, double u) noexcept {
  const double a = std::fabs(u);
  if (!(a <= 1.0)) return 0.0;
  switch (kernel.family) {
    case KernelFamily::Epanechnikov: return 0.75 * (1.0 - u * u);
    case KernelFamily::Triangular: return 1.0 - a;
    case KernelFamily::Uniform: return 0.5;
  }
  return 0.0;
}

double second_moment(const KernelSpec& kernel) noexcept {
  switch (kernel.family) {
    case KernelFamily::Epanechnikov: return 1.0 / 5.0;
    case KernelFamily::Triangular: return 1.0 / 6.0;
    case KernelFamily::Uniform: return 1.0 / 3.0;
  }
  return 0.0;
}

double squared_integral(const KernelSpec& kernel) noexcept {
  switch (kernel.family) {
    case KernelFamily::Epanechnikov: return 3.0 / 5.0;
    case KernelFamily::Triangular: return 2.0 / 3.0;
    case KernelFamily::Uniform: return 1.0 / 2.0;
  }
  return 0.0;
}

double peak(const KernelSpec& kernel) noexcept { return evaluate(kernel, 0.0); }

std::string_view kernel_name(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::Epanechnikov: return "epanechnikov";
    case KernelFamily::Triangular: return "triangular";
    case KernelFamily::Uniform: return "uniform";
  }
  return "unknown";
}

std::optional<KernelSpec> kernel_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto family : {KernelFamily::Epanechnikov, KernelFamily::Triangular, KernelFamily::Uniform}) {
    if (lower == kernel_name(family)) return KernelSpec{family, 1.0};
  }
  return std::nullopt;
}

}  // namespace dyadkde
