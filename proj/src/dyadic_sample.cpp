#include "dyadkde/dyadic_sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dyadkde/errors.hpp"

namespace dyadkde {

namespace {

std::size_t expected_pairs(std::size_t n) { return n * (n - 1) / 2; }

void check_shape(std::size_t n, std::size_t values) {
  if (n < 2) throw Error(ErrorKind::SampleTooSmall, "a dyadic sample needs n >= 2 vertices");
  if (values != expected_pairs(n)) {
    throw Error(ErrorKind::InvalidArgument,
                "expected " + std::to_string(expected_pairs(n)) + " pair values, got " +
                    std::to_string(values));
  }
}

// Validates a 1-based record and returns its 0-based pair index.
std::size_t checked_pair(const EdgeRecord& r, std::size_t n) {
  if (r.i < 1 || r.i > n || r.j < 1 || r.j > n) {
    throw Error(ErrorKind::VertexOutOfRange, "edge (" + std::to_string(r.i) + "," +
                                                 std::to_string(r.j) + ") outside 1.." +
                                                 std::to_string(n));
  }
  if (r.i == r.j) throw Error(ErrorKind::SelfLoop, "vertex " + std::to_string(r.i));
  if (!std::isfinite(r.value)) {
    throw Error(ErrorKind::NonFiniteInput, "edge (" + std::to_string(r.i) + "," +
                                               std::to_string(r.j) + ") has a non-finite value");
  }
  return pair_index(n, r.i - 1, r.j - 1);
}

}  // namespace

DyadicSample::DyadicSample(std::size_t n, std::vector<double> values)
    : DyadicSample(n, std::move(values), std::vector<std::uint8_t>(expected_pairs(n), 1)) {}

DyadicSample::DyadicSample(std::size_t n, std::vector<double> values,
                           std::vector<std::uint8_t> observed)
    : n_(n), values_(std::move(values)), mask_(std::move(observed)) {
  check_shape(n_, values_.size());
  if (mask_.size() != values_.size()) {
    throw Error(ErrorKind::InvalidArgument, "mask and values differ in length");
  }
  for (std::size_t p = 0; p < values_.size(); ++p) {
    if (mask_[p] != 0) {
      mask_[p] = 1;
      if (!std::isfinite(values_[p])) {
        throw Error(ErrorKind::NonFiniteInput, "observed pair with non-finite value");
      }
      ++observed_count_;
    } else {
      values_[p] = 0.0;
    }
  }
}

std::vector<double> DyadicSample::observed_values() const {
  std::vector<double> out;
  out.reserve(observed_count_);
  for (std::size_t p = 0; p < values_.size(); ++p) {
    if (mask_[p]) out.push_back(values_[p]);
  }
  return out;
}

std::vector<EdgeRecord> DyadicSample::to_edge_list() const {
  std::vector<EdgeRecord> out;
  out.reserve(observed_count_);
  std::size_t p = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j, ++p) {
      if (mask_[p]) out.push_back({i + 1, j + 1, values_[p]});
    }
  }
  return out;
}

DyadicSample from_edge_list(std::span<const EdgeRecord> records, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::SampleTooSmall, "a dyadic sample needs n >= 2 vertices");
  std::vector<double> values(expected_pairs(n), 0.0);
  std::vector<std::uint8_t> mask(values.size(), 0);
  for (const auto& r : records) {
    const std::size_t p = checked_pair(r, n);
    if (mask[p]) {
      throw Error(ErrorKind::DuplicateEdge, "pair {" + std::to_string(std::min(r.i, r.j)) + "," +
                                                std::to_string(std::max(r.i, r.j)) +
                                                "} listed twice");
    }
    mask[p] = 1;
    values[p] = r.value;
  }
  return DyadicSample(n, std::move(values), std::move(mask));
}

DyadicSample aggregate_multi_records(std::span<const EdgeRecord> records, SummaryStat stat,
                                     std::size_t n) {
  if (n < 2) throw Error(ErrorKind::SampleTooSmall, "a dyadic sample needs n >= 2 vertices");
  std::vector<std::vector<double>> pooled(expected_pairs(n));
  for (const auto& r : records) pooled[checked_pair(r, n)].push_back(r.value);

  std::vector<double> values(pooled.size(), 0.0);
  std::vector<std::uint8_t> mask(pooled.size(), 0);
  for (std::size_t p = 0; p < pooled.size(); ++p) {
    auto& v = pooled[p];
    if (v.empty()) continue;
    mask[p] = 1;
    switch (stat) {
      case SummaryStat::Mean:
        values[p] = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        break;
      case SummaryStat::P95:
        std::sort(v.begin(), v.end());
        values[p] = sorted_quantile(v, 0.95);
        break;
      case SummaryStat::Max:
        values[p] = *std::max_element(v.begin(), v.end());
        break;
    }
  }
  return DyadicSample(n, std::move(values), std::move(mask));
}

double observed_fraction(const DyadicSample& sample) noexcept {
  return static_cast<double>(sample.observed_count()) /
         static_cast<double>(sample.pair_count());
}

double sorted_quantile(std::span<const double> sorted, double q) noexcept {
  const std::size_t m = sorted.size();
  if (m == 1) return sorted[0];
  const double pos = q * static_cast<double>(m - 1);  // 0-based
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= m) return sorted[m - 1];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace dyadkde
