#pragma once

#include <span>

namespace dyadkde {

/// Outcome of the empirical-likelihood dual
///   ell = 2 sup_lambda sum_i log(1 + lambda v_i).
/// When 0 is not inside the convex hull of the v_i the supremum is unbounded;
/// `feasible` is false and `statistic` is +infinity.
struct ElSolution {
  double statistic = 0.0;
  double lambda = 0.0;
  bool feasible = true;
  int iterations = 0;
};

/// Throws NonFiniteInput for NaN/inf entries and InvalidArgument for empty input.
ElSolution el_log_ratio(std::span<const double> v);

/// g(lambda) = sum_i v_i / (1 + lambda v_i), the derivative of half the dual.
double el_score(std::span<const double> v, double lambda) noexcept;

}  // namespace dyadkde
