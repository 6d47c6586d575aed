#include "dyadkde/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyadkde/errors.hpp"
#include "dyadkde/simd/kernel_batch.hpp"

namespace dyadkde {

namespace {

void check_inputs(const DyadicSample& sample, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::NonPositiveBandwidth, "h = " + std::to_string(h));
  }
  if (sample.observed_count() == 0) throw Error(ErrorKind::EmptyNetwork, "no observed edges");
}

// Kernel weights for every pair; unobserved pairs are zeroed after the batch so
// their placeholder values never contribute.
std::vector<double> pair_weights(const DyadicSample& sample, const KernelSpec& kernel, double x,
                                 double h) {
  std::vector<double> k(sample.pair_count());
  simd::evaluate_batch(kernel, x, h, sample.values(), k);
  if (!sample.complete()) {
    const auto mask = sample.mask();
    for (std::size_t p = 0; p < k.size(); ++p) {
      if (!mask[p]) k[p] = 0.0;
    }
  }
  return k;
}

double bandwidth_from_spread(const Spread& s, double effective_pairs) {
  const double scale = std::min(s.sd, s.iqr / 1.34);
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::ZeroSpreadSample,
                "sd = " + std::to_string(s.sd) + ", IQR = " + std::to_string(s.iqr));
  }
  return 0.9 * scale * std::pow(1.0 / effective_pairs, 2.0 / 9.0);
}

}  // namespace

KernelSums kernel_sums(const DyadicSample& sample, const KernelSpec& kernel, double x, double h) {
  check_inputs(sample, h);
  const std::size_t n = sample.n();
  KernelSums s;
  s.x = x;
  s.h = h;
  s.n = n;
  s.k_pair = pair_weights(sample, kernel, x, h);
  s.row_sum.assign(n, 0.0);
  s.n_observed = sample.observed_count();
  s.p_hat = observed_fraction(sample);

  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++p) {
      const double k = s.k_pair[p];
      s.row_sum[i] += k;
      s.row_sum[j] += k;
      s.total += k;
    }
  }
  return s;
}

double kernel_total(const DyadicSample& sample, const KernelSpec& kernel, double x, double h) {
  check_inputs(sample, h);
  double total = 0.0;
  for (double k : pair_weights(sample, kernel, x, h)) total += k;
  return total;
}

double density_estimate(const KernelSums& sums) {
  if (!sums.complete()) {
    throw Error(ErrorKind::IncompleteSampleRequiresIncompletePath,
                std::to_string(sums.k_pair.size() - sums.n_observed) + " pairs unobserved");
  }
  return sums.total / pairs_of(static_cast<double>(sums.n));
}

double density_estimate_incomplete(const KernelSums& sums) {
  if (sums.n_observed == 0) throw Error(ErrorKind::EmptyNetwork, "no observed edges");
  return sums.total / (sums.p_hat * pairs_of(static_cast<double>(sums.n)));
}

LeaveOutEstimates leave_out_estimates(const KernelSums& sums) {
  const std::size_t n = sums.n;
  if (n < 4) {
    throw Error(ErrorKind::SampleTooSmall,
                "leave-two-out estimates need n >= 4, got n = " + std::to_string(n));
  }
  if (sums.n_observed == 0) throw Error(ErrorKind::EmptyNetwork, "no observed edges");

  const double nd = static_cast<double>(n);
  LeaveOutEstimates out;
  out.n = n;
  out.incomplete = !sums.complete();
  const double scale = out.incomplete ? sums.p_hat : 1.0;
  out.denom = scale * pairs_of(nd);
  out.denom_1 = scale * pairs_of(nd - 1.0);
  out.denom_2 = scale * pairs_of(nd - 2.0);

  const double total = sums.total;
  out.theta_hat = total / out.denom;
  out.theta_hat_i.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.theta_hat_i[i] = (total - sums.row_sum[i]) / out.denom_1;
  }
  out.theta_hat_ij.resize(sums.k_pair.size());
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++p) {
      // Rounding can leave a tiny negative remainder when every remaining
      // pair has zero weight.
      const double rest = total - sums.row_sum[i] - sums.row_sum[j] + sums.k_pair[p];
      out.theta_hat_ij[p] = std::max(rest, 0.0) / out.denom_2;
    }
  }
  for (auto& t : out.theta_hat_i) t = std::max(t, 0.0);
  return out;
}

Spread spread_of(std::vector<double> values) {
  Spread s;
  const std::size_t m = values.size();
  if (m < 2) return s;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  s.sd = std::sqrt(ss / static_cast<double>(m - 1));
  std::sort(values.begin(), values.end());
  s.iqr = sorted_quantile(values, 0.75) - sorted_quantile(values, 0.25);
  return s;
}

double rot_bandwidth(const DyadicSample& sample) {
  if (!sample.complete()) {
    throw Error(ErrorKind::IncompleteSampleRequiresIncompletePath,
                "use the incomplete-data rule when pairs are missing");
  }
  const double nd = static_cast<double>(sample.n());
  return bandwidth_from_spread(spread_of(sample.observed_values()), pairs_of(nd));
}

double rot_bandwidth_incomplete(const DyadicSample& sample) {
  if (sample.observed_count() == 0) throw Error(ErrorKind::EmptyNetwork, "no observed edges");
  const double nd = static_cast<double>(sample.n());
  return bandwidth_from_spread(spread_of(sample.observed_values()),
                               observed_fraction(sample) * pairs_of(nd));
}

double rot_bandwidth_auto(const DyadicSample& sample) {
  return sample.complete() ? rot_bandwidth(sample) : rot_bandwidth_incomplete(sample);
}

}  // namespace dyadkde
