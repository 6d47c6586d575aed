#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dyadkde/errors.hpp"
#include "dyadkde/estimator.hpp"
#include "oracle.hpp"

using namespace dyadkde;

namespace {

const KernelSpec kEpan{};

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

}  // namespace

TEST_CASE("kernel sums on tiny samples") {
  const double x = 0.4;
  const DyadicSample two(2, {x});
  const KernelSums s = kernel_sums(two, kEpan, x, 1.0);
  CHECK(s.total == 0.75);
  CHECK(s.row_sum == std::vector<double>{0.75, 0.75});

  const DyadicSample three(3, {x, x, x});
  CHECK(kernel_sums(three, kEpan, x, 2.0).total == doctest::Approx(1.125).epsilon(1e-15));

  CHECK(kind_of([&] { kernel_sums(two, kEpan, x, 0.0); }) == ErrorKind::NonPositiveBandwidth);
  CHECK(kind_of([&] { kernel_sums(two, kEpan, x, -1.0); }) == ErrorKind::NonPositiveBandwidth);
  const DyadicSample empty(3, {1.0, 2.0, 3.0}, {0, 0, 0});
  CHECK(kind_of([&] { kernel_sums(empty, kEpan, x, 1.0); }) == ErrorKind::EmptyNetwork);
}

TEST_CASE("density estimate examples") {
  const double x = 1.0;
  CHECK(density_estimate(kernel_sums(DyadicSample(3, {x, x, x}), kEpan, x, 1.0)) == 0.75);
  CHECK(density_estimate(kernel_sums(DyadicSample(2, {x + 1.5}), kEpan, x, 1.0)) == 0.0);

  // {x, x, far x4}: 2 (0.75/h) / 6 = 0.25/h
  const double h = 0.1;
  const DyadicSample four(4, {x, x, 50.0, 50.0, 50.0, 50.0});
  CHECK(density_estimate(kernel_sums(four, kEpan, x, h)) ==
        doctest::Approx(0.25 / h).epsilon(1e-14));

  const DyadicSample partial(3, {x, x, x}, {1, 1, 0});
  CHECK(kind_of([&] { density_estimate(kernel_sums(partial, kEpan, x, 1.0)); }) ==
        ErrorKind::IncompleteSampleRequiresIncompletePath);
}

TEST_CASE("kernel sums invariants") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const DyadicSample s = oracle::random_sample(rng, 4 + t % 20, t % 2 ? 0.6 : 1.0);
    const double h = 0.3 + 0.01 * t;
    const KernelSums k = kernel_sums(s, kEpan, 0.2, h);
    const double half_rows = 0.5 * std::accumulate(k.row_sum.begin(), k.row_sum.end(), 0.0);
    CHECK(rel_close(k.total, half_rows, 1e-13));
    for (double w : k.k_pair) {
      CHECK(w >= 0.0);
      CHECK(w <= peak(kEpan) / h);
    }
    CHECK(kernel_total(s, kEpan, 0.2, h) == k.total);
  }
}

TEST_CASE("leave-out estimates: symmetric and single-contributor samples") {
  const double x = 0.0;
  const LeaveOutEstimates all = leave_out_estimates(kernel_sums(DyadicSample(4, std::vector<double>(6, x)), kEpan, x, 1.0));
  CHECK(all.theta_hat == 0.75);
  for (double t : all.theta_hat_i) CHECK(t == doctest::Approx(0.75).epsilon(1e-15));
  for (double t : all.theta_hat_ij) CHECK(t == doctest::Approx(0.75).epsilon(1e-15));

  // only X_12 near x
  std::vector<double> v(6, 100.0);
  v[pair_index(4, 0, 1)] = x + 0.3;
  const KernelSums ks = kernel_sums(DyadicSample(4, v), kEpan, x, 1.0);
  const double k = ks.total;
  const LeaveOutEstimates one = leave_out_estimates(ks);
  CHECK(one.theta_hat_i[2] == doctest::Approx(k / 3.0).epsilon(1e-15));
  CHECK(one.theta_hat_ij[pair_index(4, 2, 3)] == doctest::Approx(k).epsilon(1e-15));
  CHECK(one.theta_hat_i[0] == 0.0);

  CHECK(kind_of([&] { leave_out_estimates(kernel_sums(DyadicSample(3, {x, x, x}), kEpan, x, 1.0)); }) ==
        ErrorKind::SampleTooSmall);
}

TEST_CASE("row-sum algebra matches index-set brute force") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 4 + t % 3;
    const bool incomplete = t % 4 == 3;
    const DyadicSample s = oracle::random_sample(rng, n, incomplete ? 0.7 : 1.0);
    const double x = 0.1 * (t % 7) - 0.3;
    const double h = 0.8 + 0.05 * (t % 11);
    const LeaveOutEstimates est = leave_out_estimates(kernel_sums(s, kEpan, x, h));
    const oracle::Naive naive = oracle::naive_estimates(s, kEpan, x, h);
    CHECK(est.incomplete == !s.complete());
    CHECK(rel_close(est.theta_hat, naive.theta_hat, 1e-12));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(rel_close(est.theta_hat_i[i], naive.theta_i[i], 1e-12));
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = est.theta_hat_ij[pair_index(n, i, j)];
        const double b = naive.theta_ij[i][j];
        // exact zeros from empty index sets compare absolutely
        CHECK(std::fabs(a - b) <= 1e-12 * std::max(naive.theta_hat, std::fabs(b)));
      }
    }
  }
}

TEST_CASE("averaging identity (1/n) sum theta^(i) = theta_hat") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4 + t % 30;
    const DyadicSample s = oracle::random_sample(rng, n, t % 2 ? 0.5 : 1.0);
    const LeaveOutEstimates est = leave_out_estimates(kernel_sums(s, kEpan, 0.0, 1.0));
    const double mean =
        std::accumulate(est.theta_hat_i.begin(), est.theta_hat_i.end(), 0.0) / static_cast<double>(n);
    CHECK(std::fabs(mean - est.theta_hat) <= 1e-12 * std::max(est.theta_hat, 1e-300));
  }
}

TEST_CASE("full mask incomplete path equals complete path") {
  std::mt19937_64 rng(8);
  const DyadicSample s = oracle::random_sample(rng, 9);
  const KernelSums k = kernel_sums(s, kEpan, 0.1, 0.7);
  CHECK(density_estimate_incomplete(k) == density_estimate(k));
  CHECK(k.p_hat == 1.0);
}

TEST_CASE("adding an edge in the support never lowers the total") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 6;
    DyadicSample s = oracle::random_sample(rng, n, 0.5);
    const double before = kernel_sums(s, kEpan, 0.0, 1.0).total;
    std::vector<double> values(s.values().begin(), s.values().end());
    std::vector<std::uint8_t> mask(s.mask().begin(), s.mask().end());
    const auto it = std::find(mask.begin(), mask.end(), 0);
    if (it == mask.end()) continue;
    const auto p = static_cast<std::size_t>(it - mask.begin());
    mask[p] = 1;
    values[p] = 0.25;
    const double after = kernel_sums(DyadicSample(n, values, mask), kEpan, 0.0, 1.0).total;
    CHECK(after >= before);
  }
}

TEST_CASE("density estimate integrates to about one") {
  std::mt19937_64 rng(31);
  const DyadicSample s = oracle::random_sample(rng, 40);
  const double h = rot_bandwidth(s);
  const auto v = s.observed_values();
  const double lo = *std::min_element(v.begin(), v.end()) - h;
  const double hi = *std::max_element(v.begin(), v.end()) + h;
  const int points = 4000;
  const double dx = (hi - lo) / points;
  double mass = 0.0;
  for (int k = 0; k < points; ++k) {
    mass += density_estimate(kernel_sums(s, kEpan, lo + (k + 0.5) * dx, h)) * dx;
  }
  CHECK(mass >= 0.99);
  CHECK(mass <= 1.01);
}

TEST_CASE("rule-of-thumb bandwidth formula") {
  // 25 vertices, 300 values with sd exactly 1 and a wide IQR: +-a alternating
  // with a = sqrt(299/300) gives sample sd 1 and IQR 2a, so IQR/1.34 > 1.
  const std::size_t n = 25;
  const double a = std::sqrt(299.0 / 300.0);
  std::vector<double> v(300);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = k % 2 ? a : -a;
  const DyadicSample s(n, v);
  const Spread sp = spread_of(s.observed_values());
  CHECK(sp.sd == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sp.iqr / 1.34 > 1.0);
  // 0.9 (2/600)^{2/9}, computed independently
  CHECK(rot_bandwidth(s) == doctest::Approx(0.25337929270595466).epsilon(1e-12));
  CHECK(rot_bandwidth_incomplete(s) == rot_bandwidth(s));

  // half the pairs observed, observed values keep sd 1 and a wide IQR
  std::vector<double> w(300, 0.0);
  std::vector<std::uint8_t> mask(300, 0);
  const double b = std::sqrt(149.0 / 150.0);
  for (std::size_t k = 0; k < 150; ++k) {
    mask[2 * k] = 1;
    w[2 * k] = k % 2 ? b : -b;
  }
  const DyadicSample half(n, w, mask);
  CHECK(observed_fraction(half) == 0.5);
  // 0.9 (2/300)^{2/9}, computed independently
  CHECK(rot_bandwidth_incomplete(half) == doctest::Approx(0.295574302968753).epsilon(1e-12));
  CHECK(kind_of([&] { rot_bandwidth(half); }) == ErrorKind::IncompleteSampleRequiresIncompletePath);
}

TEST_CASE("bandwidth errors and homogeneity") {
  CHECK(kind_of([&] { rot_bandwidth(DyadicSample(4, std::vector<double>(6, 2.0))); }) ==
        ErrorKind::ZeroSpreadSample);
  const DyadicSample none(4, std::vector<double>(6, 1.0), std::vector<std::uint8_t>(6, 0));
  CHECK(kind_of([&] { rot_bandwidth_incomplete(none); }) == ErrorKind::EmptyNetwork);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const DyadicSample s = oracle::random_sample(rng, 12);
    const double c = 0.5 + t;
    std::vector<double> scaled(s.values().begin(), s.values().end());
    for (auto& v : scaled) v *= c;
    CHECK(rot_bandwidth(DyadicSample(12, scaled)) ==
          doctest::Approx(c * rot_bandwidth(s)).epsilon(1e-13));
  }
}
