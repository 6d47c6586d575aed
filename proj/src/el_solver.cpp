#include "dyadkde/el_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dyadkde/errors.hpp"

namespace dyadkde {

namespace {

constexpr double kMargin = 1e-12;
constexpr double kScoreTol = 1e-10;
constexpr double kWidthTol = 1e-14;
constexpr int kMaxIterations = 500;

struct ScoreAndSlope {
  double g;
  double dg;
};

ScoreAndSlope score_and_slope(std::span<const double> v, double lambda) noexcept {
  double g = 0.0;
  double dg = 0.0;
  for (double vi : v) {
    const double r = vi / (1.0 + lambda * vi);
    g += r;
    dg -= r * r;
  }
  return {g, dg};
}

}  // namespace

double el_score(std::span<const double> v, double lambda) noexcept {
  return score_and_slope(v, lambda).g;
}

ElSolution el_log_ratio(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorKind::InvalidArgument, "empty pseudo-value vector");
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  double abs_sum = 0.0;
  for (double vi : v) {
    if (!std::isfinite(vi)) throw Error(ErrorKind::NonFiniteInput, "pseudo-value is not finite");
    vmin = std::min(vmin, vi);
    vmax = std::max(vmax, vi);
    abs_sum += std::fabs(vi);
  }

  ElSolution sol;
  if (vmin == 0.0 && vmax == 0.0) return sol;
  if (!(vmin < 0.0 && vmax > 0.0)) {
    sol.feasible = false;
    sol.statistic = std::numeric_limits<double>::infinity();
    return sol;
  }

  // g is strictly decreasing on (-1/vmax, -1/vmin), from +inf to -inf.
  const double lo_edge = -1.0 / vmax;
  const double hi_edge = -1.0 / vmin;
  double lo = lo_edge + kMargin * std::fabs(lo_edge);
  double hi = hi_edge - kMargin * std::fabs(hi_edge);
  const double tol = kScoreTol * (1.0 + abs_sum);

  double lambda = 0.0;
  ScoreAndSlope s = score_and_slope(v, lambda);
  int it = 0;
  while (std::fabs(s.g) > tol && hi - lo > kWidthTol && it < kMaxIterations) {
    ++it;
    if (s.g > 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    double next = lambda - s.g / s.dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    lambda = next;
    s = score_and_slope(v, lambda);
  }

  double sum = 0.0;
  for (double vi : v) sum += std::log1p(lambda * vi);
  sol.lambda = lambda;
  sol.statistic = 2.0 * sum;
  sol.iterations = it;
  return sol;
}

}  // namespace dyadkde
