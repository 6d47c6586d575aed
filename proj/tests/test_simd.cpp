#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "dyadkde/simd/kernel_batch.hpp"

using namespace dyadkde;

TEST_CASE("scalar backend is always available and listed first") {
  const auto backends = simd::available_backends();
  REQUIRE_FALSE(backends.empty());
  CHECK(backends.front() == simd::Backend::Scalar);
  MESSAGE("active backend: " << simd::backend_name(simd::active_backend()));
}

TEST_CASE("scalar batch equals per-element evaluate") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(257);
  for (auto& v : values) v = normal(rng);
  for (auto family : {KernelFamily::Epanechnikov, KernelFamily::Triangular, KernelFamily::Uniform}) {
    const KernelSpec k{family, 1.0};
    std::vector<double> out(values.size());
    simd::evaluate_batch(simd::Backend::Scalar, k, 0.3, 0.7, values, out);
    for (std::size_t i = 0; i < values.size(); ++i) {
      CHECK(out[i] == evaluate(k, (0.3 - values[i]) / 0.7) / 0.7);
    }
  }
}

TEST_CASE("every backend is bit-identical to scalar") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (std::size_t len : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 31u, 1000u, 4951u}) {
    std::vector<double> values(len);
    for (auto& v : values) v = normal(rng);
    // support boundaries and an exact hit on x
    if (len > 4) {
      values[0] = 1.5;   // u = -1 for x = 0.5, h = 1
      values[1] = -0.5;  // u = +1
      values[2] = 0.5;   // u = 0
      values[3] = 0.0;
    }
    for (auto family : {KernelFamily::Epanechnikov, KernelFamily::Triangular, KernelFamily::Uniform}) {
      const KernelSpec k{family, 1.0};
      for (double h : {1.0, 0.173, 2.5}) {
        std::vector<double> ref(len), got(len);
        simd::evaluate_batch(simd::Backend::Scalar, k, 0.5, h, values, ref);
        for (auto b : simd::available_backends()) {
          CAPTURE(simd::backend_name(b));
          CAPTURE(len);
          simd::evaluate_batch(b, k, 0.5, h, values, got);
          CHECK(std::memcmp(ref.data(), got.data(), len * sizeof(double)) == 0);
        }
      }
    }
  }
}

TEST_CASE("non-finite inputs fall outside the support on every backend") {
  const KernelSpec k{};
  const std::vector<double> values{std::numeric_limits<double>::quiet_NaN(),
                                   std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
  std::vector<double> out(values.size());
  for (auto b : simd::available_backends()) {
    simd::evaluate_batch(b, k, 0.0, 1.0, values, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.75);
  }
}
