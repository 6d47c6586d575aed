#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dyadkde {

enum class ErrorKind {
  // ingestion
  DuplicateEdge,
  VertexOutOfRange,
  SelfLoop,
  // estimation
  NonPositiveBandwidth,
  EmptyNetwork,
  IncompleteSampleRequiresIncompletePath,
  SampleTooSmall,
  ZeroSpreadSample,
  // inference
  NonPositiveModifiedVariance,
  NonFiniteInput,
  BracketFailure,
  InvalidArgument,
};

std::string_view error_name(ErrorKind kind) noexcept;

/// Every library failure carries a stable kind; the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dyadkde
