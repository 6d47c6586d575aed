#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "dyadkde/dyadic_sample.hpp"
#include "dyadkde/el_solver.hpp"
#include "dyadkde/estimator.hpp"
#include "dyadkde/kernel.hpp"

namespace dyadkde {

enum class Method { JEL, MJEL, MJKWald };

std::string_view method_name(Method method) noexcept;  // "jel", "mjel", "mjk"
std::optional<Method> method_from_name(std::string_view name);

/// Jackknife pseudo-values at one hypothesized theta.
struct PseudoValueSet {
  double theta = 0.0;
  double theta_hat = 0.0;
  std::vector<double> v_at_theta;      // V_i(theta)
  std::vector<double> v_at_theta_hat;  // V_i(theta_hat), sums to zero
  std::vector<double> q;               // Q_ij in pair_index order; theta-free
  double gamma_sq = 0.0;               // (1/n) sum V_i(theta)^2
  double gamma_m_sq = 0.0;             // (1/n) sum V_i(theta_hat)^2 - (1/n) sum_{i<j} Q_ij^2
  bool incomplete = false;
};

/// V_i(theta) = n S(theta) - (n-1) S^(i)(theta) for every vertex.
std::vector<double> jel_pseudo_values(const LeaveOutEstimates& est, double theta);

/// Q_ij evaluated literally at `theta`. The theta terms cancel, so any theta
/// gives the same value up to rounding.
double pair_pseudo_value(const LeaveOutEstimates& est, std::size_t i, std::size_t j, double theta);

/// Full pseudo-value set. Q is evaluated at theta_hat. Never throws for a
/// non-positive modified variance; consumers that need Gamma_m check it.
PseudoValueSet pseudo_values(const LeaveOutEstimates& est, double theta);

/// V^m_i(theta) = V_i(theta_hat) - (Gamma/Gamma_m)(theta - theta_hat).
/// Throws NonPositiveModifiedVariance when gamma_m_sq <= 0.
std::vector<double> modified_pseudo_values(const PseudoValueSet& pv);

/// chi^2_1 quantile at 1 - alpha.
double chi2_critical_value(double alpha);
/// Standard-normal quantile at 1 - alpha/2.
double normal_critical_value(double alpha);

struct InferenceResult {
  Method method = Method::JEL;
  double statistic = 0.0;  // value at theta_hat
  double theta_hat = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;
  double critical_value = 0.0;  // c_alpha for EL methods, z_{alpha/2} for the Wald interval
};

struct ProfilePoint {
  double theta = 0.0;
  double statistic = 0.0;
};

/// Inference at one design point. Builds the kernel sums, leave-out estimates,
/// V(theta_hat), Q and Gamma_m^2 once; statistics at any theta then cost O(n).
///
/// Picks the incomplete-data formulas automatically when the sample's mask is
/// not full.
class PointInference {
 public:
  PointInference(const DyadicSample& sample, const KernelSpec& kernel, double x, double h);

  std::size_t n() const noexcept { return est_.n; }
  double x() const noexcept { return x_; }
  double h() const noexcept { return h_; }
  bool incomplete() const noexcept { return est_.incomplete; }
  double theta_hat() const noexcept { return est_.theta_hat; }
  double gamma_m_sq() const noexcept { return gamma_m_sq_; }
  const LeaveOutEstimates& leave_out() const noexcept { return est_; }
  const std::vector<double>& v_at_theta_hat() const noexcept { return v_hat_; }
  const std::vector<double>& q() const noexcept { return q_; }

  PseudoValueSet pseudo_values(double theta) const;

  /// ell(theta); +infinity when 0 is outside the pseudo-values' convex hull.
  ElSolution jel(double theta) const;
  /// ell^m(theta). Throws NonPositiveModifiedVariance.
  ElSolution mjel(double theta) const;
  /// jel() or mjel() by method. MJKWald returns the squared z statistic.
  double statistic(Method method, double theta) const;

  /// [theta_hat +- n^{-1/2} z_{alpha/2} Gamma_m]. Throws NonPositiveModifiedVariance.
  InferenceResult wald_interval(double alpha) const;

  /// {theta : ell(theta) <= c_alpha} by expanding bracket and bisection on each
  /// side of theta_hat; the lower end is clamped at 0. Throws BracketFailure.
  InferenceResult invert_test(double alpha, Method method) const;

  /// Statistic on an evenly spaced theta grid, for checking that the region is
  /// an interval.
  std::vector<ProfilePoint> statistic_profile(Method method, double lo, double hi,
                                              std::size_t points = 201) const;

 private:
  void require_modified_variance() const;

  double x_;
  double h_;
  LeaveOutEstimates est_;
  std::vector<double> v_hat_;
  std::vector<double> q_;
  double gamma_hat_sq_ = 0.0;
  double gamma_m_sq_ = 0.0;
};

/// Number of times the profile crosses `level` (sign changes of stat - level).
std::size_t count_crossings(const std::vector<ProfilePoint>& profile, double level);

// Single-call conveniences over PointInference.
double jel_statistic(const DyadicSample& sample, const KernelSpec& kernel, double x, double h,
                     double theta);
double mjel_statistic(const DyadicSample& sample, const KernelSpec& kernel, double x, double h,
                      double theta);
InferenceResult mjk_wald_interval(const DyadicSample& sample, const KernelSpec& kernel, double x,
                                  double h, double alpha);
InferenceResult invert_test(const DyadicSample& sample, const KernelSpec& kernel, double x,
                            double h, double alpha, Method method);

}  // namespace dyadkde
