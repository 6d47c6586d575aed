#pragma once

#include <cstddef>
#include <vector>

#include "dyadkde/dyadic_sample.hpp"
#include "dyadkde/kernel.hpp"

namespace dyadkde {

/// Per-edge kernel weights K_ij = K((x - X_ij)/h)/h at one design point, with
/// their vertex row sums. Everything leave-out is derived from these in O(1).
struct KernelSums {
  double x = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  std::vector<double> k_pair;   // pair_index order; 0 for unobserved pairs
  std::vector<double> row_sum;  // sum over observed pairs containing vertex i
  double total = 0.0;
  std::size_t n_observed = 0;
  double p_hat = 1.0;

  bool complete() const noexcept { return n_observed == k_pair.size(); }
};

/// Throws NonPositiveBandwidth, EmptyNetwork.
KernelSums kernel_sums(const DyadicSample& sample, const KernelSpec& kernel, double x, double h);

/// Sum of K_ij over observed pairs only, without row sums. Same summation order
/// as kernel_sums(), so the totals agree exactly.
double kernel_total(const DyadicSample& sample, const KernelSpec& kernel, double x, double h);

/// Complete-data estimate C(n,2)^{-1} * total.
/// Throws IncompleteSampleRequiresIncompletePath when some pair is unobserved.
double density_estimate(const KernelSums& sums);

/// total / N_hat with N_hat = p_hat C(n,2); equals density_estimate() on a full mask.
double density_estimate_incomplete(const KernelSums& sums);

/// Leave-one-out and leave-two-out estimates for every vertex and pair.
struct LeaveOutEstimates {
  std::size_t n = 0;
  bool incomplete = false;
  double theta_hat = 0.0;
  std::vector<double> theta_hat_i;   // length n
  std::vector<double> theta_hat_ij;  // pair_index order
  // C(n,2), C(n-1,2), C(n-2,2), each scaled by p_hat on the incomplete path.
  double denom = 0.0;
  double denom_1 = 0.0;
  double denom_2 = 0.0;
};

/// Chooses the incomplete path when the mask is not full. Throws SampleTooSmall
/// (n < 4), EmptyNetwork.
LeaveOutEstimates leave_out_estimates(const KernelSums& sums);

/// Rule-of-thumb bandwidth for a complete sample:
/// 0.9 min(sd, IQR/1.34) (2/(n(n-1)))^{2/9}.
/// Throws IncompleteSampleRequiresIncompletePath, ZeroSpreadSample.
double rot_bandwidth(const DyadicSample& sample);

/// Rule-of-thumb bandwidth over observed edges with effective size p_hat n(n-1).
/// Throws EmptyNetwork, ZeroSpreadSample.
double rot_bandwidth_incomplete(const DyadicSample& sample);

/// rot_bandwidth() on complete samples, rot_bandwidth_incomplete() otherwise.
double rot_bandwidth_auto(const DyadicSample& sample);

/// Sample standard deviation (denominator m-1) and interquartile range.
struct Spread {
  double sd = 0.0;
  double iqr = 0.0;
};
Spread spread_of(std::vector<double> values);

}  // namespace dyadkde
