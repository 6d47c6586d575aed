#include "dyadkde/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "dyadkde/errors.hpp"
#include "dyadkde/estimator.hpp"
#include "dyadkde/rng.hpp"

namespace dyadkde {

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

enum class Outcome : unsigned char { Covered, NotCovered, Infeasible, NonPositive, Other };

struct RepResult {
  std::vector<Outcome> outcomes;
  double h = std::numeric_limits<double>::quiet_NaN();
};

Outcome score_el(const PointInference& inf, Method method, double theta, double c) {
  try {
    const ElSolution s = method == Method::JEL ? inf.jel(theta) : inf.mjel(theta);
    if (!s.feasible) return Outcome::Infeasible;
    return s.statistic <= c ? Outcome::Covered : Outcome::NotCovered;
  } catch (const Error& e) {
    return e.kind() == ErrorKind::NonPositiveModifiedVariance ? Outcome::NonPositive
                                                              : Outcome::Other;
  }
}

Outcome score_wald(const PointInference& inf, double theta, double alpha) {
  try {
    const InferenceResult r = inf.wald_interval(alpha);
    return (r.lower <= theta && theta <= r.upper) ? Outcome::Covered : Outcome::NotCovered;
  } catch (const Error& e) {
    return e.kind() == ErrorKind::NonPositiveModifiedVariance ? Outcome::NonPositive
                                                              : Outcome::Other;
  }
}

RepResult run_replication(const SimulationConfig& config, std::uint64_t rep, double theta_true,
                          double c_alpha) {
  RepResult out;
  out.outcomes.assign(config.methods.size(), Outcome::Other);
  try {
    const DyadicSample sample = generate_sample(config, rep);
    out.h = config.bandwidth.apply(sample);
    const PointInference inf(sample, config.kernel, config.x, out.h);
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      const Method method = config.methods[m];
      out.outcomes[m] = method == Method::MJKWald
                            ? score_wald(inf, theta_true, config.alpha)
                            : score_el(inf, method, theta_true, c_alpha);
    }
  } catch (const Error&) {
    // bandwidth / estimator failure: every method records Other
  }
  return out;
}

}  // namespace

BandwidthChoice BandwidthChoice::parse(const std::string& text) {
  if (text == "rot" || text == "auto") return {BandwidthRule::RotAuto, 0.0};
  if (text == "rot-complete" || text == "rotComplete") return {BandwidthRule::RotComplete, 0.0};
  if (text == "rot-incomplete" || text == "rotIncomplete") {
    return {BandwidthRule::RotIncomplete, 0.0};
  }
  std::size_t used = 0;
  double h = 0.0;
  try {
    h = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0) {
    throw Error(ErrorKind::InvalidArgument, "unknown bandwidth rule '" + text + "'");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::NonPositiveBandwidth, "h = " + text);
  }
  return {BandwidthRule::Fixed, h};
}

std::string BandwidthChoice::name() const {
  switch (rule) {
    case BandwidthRule::RotAuto: return "rot";
    case BandwidthRule::RotComplete: return "rot-complete";
    case BandwidthRule::RotIncomplete: return "rot-incomplete";
    case BandwidthRule::Fixed: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", h);
      return buf;
    }
  }
  return "unknown";
}

double BandwidthChoice::apply(const DyadicSample& sample) const {
  switch (rule) {
    case BandwidthRule::RotAuto: return rot_bandwidth_auto(sample);
    case BandwidthRule::RotComplete: return rot_bandwidth(sample);
    case BandwidthRule::RotIncomplete: return rot_bandwidth_incomplete(sample);
    case BandwidthRule::Fixed: return h;
  }
  return h;
}

void SimulationConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (beta != 0 && beta != 1) fail("beta must be 0 or 1");
  if (n < 4) fail("n must be at least 4");
  if (!(p > 0.0 && p <= 1.0)) fail("p must lie in (0,1]");
  if (reps < 1) fail("reps must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1)");
  if (!std::isfinite(x)) fail("x must be finite");
  if (methods.empty()) fail("at least one method is required");
  if (bandwidth.rule == BandwidthRule::RotComplete && p < 1.0) {
    fail("rot-complete bandwidth needs p = 1; use rot-incomplete");
  }
  if (bandwidth.rule == BandwidthRule::Fixed && !(bandwidth.h > 0.0)) fail("h must be positive");
}

DyadicSample generate_sample(const SimulationConfig& config, std::uint64_t rep_index) {
  const std::size_t n = config.n;
  const CounterRng vertex = replication_stream(config.base_seed, rep_index, StreamRole::VertexShock);
  const CounterRng pair = replication_stream(config.base_seed, rep_index, StreamRole::PairShock);
  const CounterRng obs = replication_stream(config.base_seed, rep_index, StreamRole::Observation);

  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = vertex.uniform(i) < 1.0 / 3.0 ? -1.0 : 1.0;

  const double beta = static_cast<double>(config.beta);
  std::vector<double> values(n * (n - 1) / 2);
  std::vector<std::uint8_t> mask(values.size(), 1);
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++p) {
      values[p] = beta * u[i] * u[j] + pair.normal(p);
      if (config.p < 1.0) mask[p] = obs.uniform(p) < config.p ? 1 : 0;
    }
  }
  return DyadicSample(n, std::move(values), std::move(mask));
}

double true_density(int beta, double x) {
  if (beta == 0) return normal_pdf(x);
  return 5.0 / 9.0 * normal_pdf(x - 1.0) + 4.0 / 9.0 * normal_pdf(x + 1.0);
}

double MethodCoverage::coverage() const noexcept {
  const std::size_t m = evaluated();
  return m == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(m);
}

double MethodCoverage::mc_standard_error() const noexcept {
  const std::size_t m = evaluated();
  if (m == 0) return 0.0;
  const double c = coverage();
  return std::sqrt(c * (1.0 - c) / static_cast<double>(m));
}

const MethodCoverage& CoverageReport::at(Method m) const {
  for (const auto& mc : methods) {
    if (mc.method == m) return mc;
  }
  throw Error(ErrorKind::InvalidArgument, "method not part of this report");
}

CoverageReport coverage_experiment(const SimulationConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  CoverageReport report;
  report.config = config;
  report.theta_true = true_density(config.beta, config.x);
  const double c_alpha = chi2_critical_value(config.alpha);

  std::vector<RepResult> results(config.reps);
  parallel_for(config.reps, resolve_threads(config.threads), [&](std::size_t rep) {
    results[rep] = run_replication(config, rep, report.theta_true, c_alpha);
  });

  // reduce in replication order
  report.methods.resize(config.methods.size());
  for (std::size_t m = 0; m < config.methods.size(); ++m) report.methods[m].method = config.methods[m];
  double h_sum = 0.0;
  std::size_t h_count = 0;
  for (const auto& r : results) {
    if (std::isfinite(r.h)) {
      h_sum += r.h;
      ++h_count;
    }
    for (std::size_t m = 0; m < r.outcomes.size(); ++m) {
      auto& mc = report.methods[m];
      switch (r.outcomes[m]) {
        case Outcome::Covered: ++mc.covered; break;
        case Outcome::NotCovered: ++mc.not_covered; break;
        case Outcome::Infeasible: ++mc.infeasible; break;
        case Outcome::NonPositive: ++mc.nonpositive_variance; break;
        case Outcome::Other: ++mc.other_failures; break;
      }
    }
  }
  report.mean_bandwidth = h_count ? h_sum / static_cast<double>(h_count) : 0.0;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double sup_error(const DyadicSample& sample, const KernelSpec& kernel, double h, int beta,
                 const std::vector<double>& grid) {
  const double denom = sample.complete()
                           ? pairs_of(static_cast<double>(sample.n()))
                           : static_cast<double>(sample.observed_count());
  double worst = 0.0;
  for (double x : grid) {
    const double f_hat = kernel_total(sample, kernel, x, h) / denom;
    worst = std::max(worst, std::fabs(f_hat - true_density(beta, x)));
  }
  return worst;
}

std::vector<SupErrorRow> sup_error_experiment(int beta, const std::vector<std::size_t>& n_list,
                                              const std::vector<double>& grid, std::size_t reps,
                                              std::uint64_t base_seed, std::size_t threads) {
  std::vector<SupErrorRow> rows;
  const KernelSpec kernel{};
  for (std::size_t n : n_list) {
    SimulationConfig cfg;
    cfg.beta = beta;
    cfg.n = n;
    cfg.p = 1.0;
    cfg.base_seed = base_seed;
    std::vector<double> errors(reps);
    parallel_for(reps, resolve_threads(threads), [&](std::size_t rep) {
      const DyadicSample sample = generate_sample(cfg, rep);
      errors[rep] = sup_error(sample, kernel, rot_bandwidth(sample), beta, grid);
    });
    std::sort(errors.begin(), errors.end());
    const std::size_t mid = reps / 2;
    const double median = reps % 2 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);
    rows.push_back({n, median});
  }
  return rows;
}

std::vector<double> default_sup_grid() {
  std::vector<double> grid(101);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = -2.0 + 0.04 * static_cast<double>(k);
  return grid;
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DYADKDE_THREADS"); env != nullptr) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& task) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          task(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dyadkde
