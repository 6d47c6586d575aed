#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dyadkde/el_inference.hpp"
#include "dyadkde/kernel.hpp"

namespace dyadkde::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitInternal = 4,
};

/// Entry point shared by the `dyadkde` binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "min:max:step" (inclusive of max up to rounding) or "a,b,c". Throws InputError.
std::vector<double> parse_grid(const std::string& spec);

struct ProfileRow {
  double x = 0.0;
  double theta_hat = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  Method method = Method::MJEL;
  double h = 0.0;
  std::optional<std::string> failure;  // error name when the row failed
};

}  // namespace dyadkde::cli
