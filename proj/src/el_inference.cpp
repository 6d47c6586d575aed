#include "dyadkde/el_inference.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "dyadkde/errors.hpp"

namespace dyadkde {

namespace {

constexpr double kBisectionTol = 1e-8;
constexpr int kMaxDoublings = 60;

double mean_square(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s / static_cast<double>(v.size());
}

std::vector<double> q_values(const LeaveOutEstimates& est, double theta) {
  std::vector<double> q(est.theta_hat_ij.size());
  std::size_t p = 0;
  for (std::size_t i = 0; i < est.n; ++i) {
    for (std::size_t j = i + 1; j < est.n; ++j, ++p) q[p] = pair_pseudo_value(est, i, j, theta);
  }
  return q;
}

double sum_of_squares(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1), got " + std::to_string(alpha));
  }
}

}  // namespace

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::JEL: return "jel";
    case Method::MJEL: return "mjel";
    case Method::MJKWald: return "mjk";
  }
  return "unknown";
}

std::optional<Method> method_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto m : {Method::JEL, Method::MJEL, Method::MJKWald}) {
    if (lower == method_name(m)) return m;
  }
  return std::nullopt;
}

std::vector<double> jel_pseudo_values(const LeaveOutEstimates& est, double theta) {
  const double nd = static_cast<double>(est.n);
  const double s = est.theta_hat - theta;
  std::vector<double> v(est.n);
  for (std::size_t i = 0; i < est.n; ++i) {
    v[i] = nd * s - (nd - 1.0) * (est.theta_hat_i[i] - theta);
  }
  return v;
}

double pair_pseudo_value(const LeaveOutEstimates& est, std::size_t i, std::size_t j,
                         double theta) {
  const double nd = static_cast<double>(est.n);
  const double s = est.theta_hat - theta;
  const double si = est.theta_hat_i[i] - theta;
  const double sj = est.theta_hat_i[j] - theta;
  const double sij = est.theta_hat_ij[pair_index(est.n, i, j)] - theta;
  return (nd - 3.0) / (nd - 1.0) * (nd * s - (nd - 1.0) * (si + sj) + (nd - 2.0) * sij);
}

PseudoValueSet pseudo_values(const LeaveOutEstimates& est, double theta) {
  if (est.n < 4) throw Error(ErrorKind::SampleTooSmall, "pseudo-values need n >= 4");
  PseudoValueSet pv;
  pv.theta = theta;
  pv.theta_hat = est.theta_hat;
  pv.incomplete = est.incomplete;
  pv.v_at_theta = jel_pseudo_values(est, theta);
  pv.v_at_theta_hat = jel_pseudo_values(est, est.theta_hat);
  pv.q = q_values(est, est.theta_hat);
  pv.gamma_sq = mean_square(pv.v_at_theta);
  const double nd = static_cast<double>(est.n);
  pv.gamma_m_sq = mean_square(pv.v_at_theta_hat) - sum_of_squares(pv.q) / nd;
  return pv;
}

std::vector<double> modified_pseudo_values(const PseudoValueSet& pv) {
  if (!(pv.gamma_m_sq > 0.0)) {
    throw Error(ErrorKind::NonPositiveModifiedVariance,
                "Gamma_m^2 = " + std::to_string(pv.gamma_m_sq));
  }
  const double ratio = std::sqrt(pv.gamma_sq) / std::sqrt(pv.gamma_m_sq);
  const double shift = ratio * (pv.theta - pv.theta_hat);
  std::vector<double> vm(pv.v_at_theta_hat.size());
  for (std::size_t i = 0; i < vm.size(); ++i) vm[i] = pv.v_at_theta_hat[i] - shift;
  return vm;
}

double chi2_critical_value(double alpha) {
  check_alpha(alpha);
  return boost::math::quantile(boost::math::chi_squared(1.0), 1.0 - alpha);
}

double normal_critical_value(double alpha) {
  check_alpha(alpha);
  return boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
}

PointInference::PointInference(const DyadicSample& sample, const KernelSpec& kernel, double x,
                               double h)
    : x_(x), h_(h), est_(leave_out_estimates(kernel_sums(sample, kernel, x, h))) {
  v_hat_ = jel_pseudo_values(est_, est_.theta_hat);
  q_ = q_values(est_, est_.theta_hat);
  gamma_hat_sq_ = mean_square(v_hat_);
  gamma_m_sq_ = gamma_hat_sq_ - sum_of_squares(q_) / static_cast<double>(est_.n);
}

PseudoValueSet PointInference::pseudo_values(double theta) const {
  PseudoValueSet pv;
  pv.theta = theta;
  pv.theta_hat = est_.theta_hat;
  pv.incomplete = est_.incomplete;
  pv.v_at_theta = jel_pseudo_values(est_, theta);
  pv.v_at_theta_hat = v_hat_;
  pv.q = q_;
  pv.gamma_sq = mean_square(pv.v_at_theta);
  pv.gamma_m_sq = gamma_m_sq_;
  return pv;
}

void PointInference::require_modified_variance() const {
  if (!(gamma_m_sq_ > 0.0)) {
    throw Error(ErrorKind::NonPositiveModifiedVariance,
                "Gamma_m^2 = " + std::to_string(gamma_m_sq_) + " at x = " + std::to_string(x_));
  }
}

ElSolution PointInference::jel(double theta) const {
  return el_log_ratio(jel_pseudo_values(est_, theta));
}

ElSolution PointInference::mjel(double theta) const {
  require_modified_variance();
  PseudoValueSet pv;
  pv.theta = theta;
  pv.theta_hat = est_.theta_hat;
  pv.v_at_theta_hat = v_hat_;
  pv.gamma_sq = mean_square(jel_pseudo_values(est_, theta));
  pv.gamma_m_sq = gamma_m_sq_;
  return el_log_ratio(modified_pseudo_values(pv));
}

double PointInference::statistic(Method method, double theta) const {
  switch (method) {
    case Method::JEL: return jel(theta).statistic;
    case Method::MJEL: return mjel(theta).statistic;
    case Method::MJKWald: {
      require_modified_variance();
      const double z = std::sqrt(static_cast<double>(est_.n)) * (est_.theta_hat - theta) /
                       std::sqrt(gamma_m_sq_);
      return z * z;
    }
  }
  return 0.0;
}

InferenceResult PointInference::wald_interval(double alpha) const {
  require_modified_variance();
  InferenceResult r;
  r.method = Method::MJKWald;
  r.alpha = alpha;
  r.critical_value = normal_critical_value(alpha);
  r.theta_hat = est_.theta_hat;
  r.statistic = 0.0;
  const double half =
      r.critical_value * std::sqrt(gamma_m_sq_) / std::sqrt(static_cast<double>(est_.n));
  r.lower = r.theta_hat - half;
  r.upper = r.theta_hat + half;
  return r;
}

InferenceResult PointInference::invert_test(double alpha, Method method) const {
  if (method == Method::MJKWald) return wald_interval(alpha);
  if (method == Method::MJEL) require_modified_variance();

  InferenceResult r;
  r.method = method;
  r.alpha = alpha;
  r.critical_value = chi2_critical_value(alpha);
  r.theta_hat = est_.theta_hat;
  r.statistic = statistic(method, r.theta_hat);

  const double c = r.critical_value;
  const double th = r.theta_hat;
  const double nd = static_cast<double>(est_.n);
  // JEL stays usable when Gamma_m^2 <= 0; its step falls back to Gamma(theta_hat).
  const double spread = gamma_m_sq_ > 0.0 ? gamma_m_sq_ : gamma_hat_sq_;
  const double step0 = std::max(std::sqrt(spread / nd), 1e-3 * (1.0 + th));
  auto inside = [&](double theta) { return statistic(method, theta) <= c; };

  // upper side
  {
    double in = th;
    double step = step0;
    double out = th + step;
    int doublings = 0;
    while (inside(out)) {
      if (++doublings > kMaxDoublings) {
        throw Error(ErrorKind::BracketFailure, "statistic never exceeds c_alpha above theta_hat");
      }
      in = out;
      step *= 2.0;
      out = th + step;
    }
    while (out - in > kBisectionTol) {
      const double mid = 0.5 * (in + out);
      (inside(mid) ? in : out) = mid;
    }
    r.upper = 0.5 * (in + out);
  }
  // lower side, clamped at zero
  {
    double in = th;
    double step = step0;
    double out = std::max(th - step, 0.0);
    int doublings = 0;
    bool clamped = false;
    while (inside(out)) {
      if (out == 0.0) {
        clamped = true;
        break;
      }
      if (++doublings > kMaxDoublings) {
        throw Error(ErrorKind::BracketFailure, "statistic never exceeds c_alpha below theta_hat");
      }
      in = out;
      step *= 2.0;
      out = std::max(th - step, 0.0);
    }
    if (clamped) {
      r.lower = 0.0;
    } else {
      while (in - out > kBisectionTol) {
        const double mid = 0.5 * (in + out);
        (inside(mid) ? in : out) = mid;
      }
      r.lower = std::min(0.5 * (in + out), th);
    }
  }
  r.upper = std::max(r.upper, th);
  return r;
}

std::vector<ProfilePoint> PointInference::statistic_profile(Method method, double lo, double hi,
                                                            std::size_t points) const {
  std::vector<ProfilePoint> out;
  if (points == 0) return out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double t = points == 1 ? lo
                                 : lo + (hi - lo) * static_cast<double>(k) /
                                            static_cast<double>(points - 1);
    out.push_back({t, statistic(method, t)});
  }
  return out;
}

std::size_t count_crossings(const std::vector<ProfilePoint>& profile, double level) {
  std::size_t crossings = 0;
  for (std::size_t k = 1; k < profile.size(); ++k) {
    const bool a = profile[k - 1].statistic <= level;
    const bool b = profile[k].statistic <= level;
    if (a != b) ++crossings;
  }
  return crossings;
}

double jel_statistic(const DyadicSample& sample, const KernelSpec& kernel, double x, double h,
                     double theta) {
  return PointInference(sample, kernel, x, h).jel(theta).statistic;
}

double mjel_statistic(const DyadicSample& sample, const KernelSpec& kernel, double x, double h,
                      double theta) {
  return PointInference(sample, kernel, x, h).mjel(theta).statistic;
}

InferenceResult mjk_wald_interval(const DyadicSample& sample, const KernelSpec& kernel, double x,
                                  double h, double alpha) {
  return PointInference(sample, kernel, x, h).wald_interval(alpha);
}

InferenceResult invert_test(const DyadicSample& sample, const KernelSpec& kernel, double x,
                            double h, double alpha, Method method) {
  return PointInference(sample, kernel, x, h).invert_test(alpha, method);
}

}  // namespace dyadkde
