#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dyadkde/dyadic_sample.hpp"
#include "dyadkde/el_inference.hpp"
#include "dyadkde/kernel.hpp"

namespace dyadkde {

enum class BandwidthRule { RotAuto, RotComplete, RotIncomplete, Fixed };

struct BandwidthChoice {
  BandwidthRule rule = BandwidthRule::RotAuto;
  double h = 0.0;  // used by Fixed only

  /// "rot", "rot-complete", "rot-incomplete", or a positive number.
  static BandwidthChoice parse(const std::string& text);
  std::string name() const;
  double apply(const DyadicSample& sample) const;
};

/// One simulation design: X_ij = beta U_i U_j + U_ij with U_i = -1 w.p. 1/3
/// (else +1), U_ij ~ N(0,1), and each pair observed independently w.p. p.
struct SimulationConfig {
  int beta = 1;
  std::size_t n = 100;
  double p = 1.0;
  std::size_t reps = 1000;
  double alpha = 0.05;
  double x = 1.675;
  KernelSpec kernel{};
  BandwidthChoice bandwidth{};
  std::uint64_t base_seed = 1;
  std::vector<Method> methods{Method::JEL, Method::MJEL, Method::MJKWald};
  std::size_t threads = 0;  // 0: DYADKDE_THREADS or hardware concurrency

  /// Throws InvalidArgument describing the first bad field.
  void validate() const;
};

/// Replication `rep_index` of the design. Deterministic in (base_seed,
/// rep_index); the mask is full when p == 1.
DyadicSample generate_sample(const SimulationConfig& config, std::uint64_t rep_index);

/// Density of X_12: (5/9) phi(x-1) + (4/9) phi(x+1) for beta = 1, phi(x) for beta = 0.
double true_density(int beta, double x);

struct MethodCoverage {
  Method method = Method::JEL;
  std::size_t covered = 0;
  std::size_t not_covered = 0;
  std::size_t infeasible = 0;              // ell(theta_true) = +inf
  std::size_t nonpositive_variance = 0;    // Gamma_m^2 <= 0
  std::size_t other_failures = 0;          // bandwidth or estimator errors

  std::size_t failures() const noexcept {
    return infeasible + nonpositive_variance + other_failures;
  }
  std::size_t evaluated() const noexcept { return covered + not_covered; }
  /// covered / evaluated; failures are excluded from the denominator.
  double coverage() const noexcept;
  /// sqrt(c (1 - c) / evaluated).
  double mc_standard_error() const noexcept;
};

struct CoverageReport {
  SimulationConfig config;
  double theta_true = 0.0;
  std::vector<MethodCoverage> methods;
  double mean_bandwidth = 0.0;
  double wall_seconds = 0.0;

  const MethodCoverage& at(Method m) const;
};

/// Runs config.reps replications in parallel. JEL/mJEL coverage is scored by
/// ell(theta_true) <= c_alpha, mJK by interval membership. The report does not
/// depend on the thread count.
CoverageReport coverage_experiment(const SimulationConfig& config);

/// max over `grid` of |f_hat(x) - f(x)| for one sample at bandwidth h.
double sup_error(const DyadicSample& sample, const KernelSpec& kernel, double h, int beta,
                 const std::vector<double>& grid);

struct SupErrorRow {
  std::size_t n = 0;
  double median_sup_error = 0.0;
};

/// For each n, the median over `reps` complete replications of sup_error with
/// the complete-data rule-of-thumb bandwidth.
std::vector<SupErrorRow> sup_error_experiment(int beta, const std::vector<std::size_t>& n_list,
                                              const std::vector<double>& grid, std::size_t reps,
                                              std::uint64_t base_seed, std::size_t threads = 0);

/// 101 points on [-2, 2].
std::vector<double> default_sup_grid();

/// `requested` if nonzero, else DYADKDE_THREADS if set and nonzero, else the
/// hardware concurrency (at least 1).
std::size_t resolve_threads(std::size_t requested);

/// Calls task(k) for k in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& task);

}  // namespace dyadkde
