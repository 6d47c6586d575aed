#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dyadkde {

/// C(m, 2) as a double, for denominators.
constexpr double pairs_of(double m) noexcept { return m * (m - 1.0) / 2.0; }

/// Index of the unordered pair {i, j} (0-based, i != j) in row-major
/// upper-triangle order: (0,1), (0,2), ..., (0,n-1), (1,2), ...
constexpr std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  if (i > j) {
    const std::size_t t = i;
    i = j;
    j = t;
  }
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// One row of an edge list. Vertex ids are 1-based, as in the CSV format.
struct EdgeRecord {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

enum class SummaryStat { Mean, P95, Max };

/// Undirected network on vertices 0..n-1 with one real value per observed pair.
///
/// Values and the observation mask are stored flat over the C(n,2) pairs in
/// pair_index order. Unobserved pairs hold 0.0, which is never read as data:
/// missingness lives only in the mask, so an observed 0.0 is a real value.
class DyadicSample {
 public:
  /// Complete sample. `values` is in pair_index order and has C(n,2) entries.
  DyadicSample(std::size_t n, std::vector<double> values);

  /// Sample with an explicit mask (nonzero = observed), both in pair_index order.
  DyadicSample(std::size_t n, std::vector<double> values, std::vector<std::uint8_t> observed);

  std::size_t n() const noexcept { return n_; }
  std::size_t pair_count() const noexcept { return values_.size(); }
  std::size_t observed_count() const noexcept { return observed_count_; }
  bool complete() const noexcept { return observed_count_ == values_.size(); }

  bool observed(std::size_t i, std::size_t j) const noexcept {
    return mask_[pair_index(n_, i, j)] != 0;
  }
  double value(std::size_t i, std::size_t j) const noexcept {
    return values_[pair_index(n_, i, j)];
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }

  /// Values of observed pairs, in pair order.
  std::vector<double> observed_values() const;

  /// Observed pairs as 1-based edge records.
  std::vector<EdgeRecord> to_edge_list() const;

 private:
  std::size_t n_;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
  std::size_t observed_count_ = 0;
};

/// Builds a sample from at most one record per unordered pair; absent pairs are
/// unobserved. Throws DuplicateEdge, VertexOutOfRange, SelfLoop.
DyadicSample from_edge_list(std::span<const EdgeRecord> records, std::size_t n);

/// Pools all records of each unordered pair (both orientations) and keeps the
/// chosen summary. Throws VertexOutOfRange, SelfLoop.
DyadicSample aggregate_multi_records(std::span<const EdgeRecord> records, SummaryStat stat,
                                     std::size_t n);

/// Fraction of the C(n,2) pairs that are observed.
double observed_fraction(const DyadicSample& sample) noexcept;

/// Quantile q in [0,1] of `sorted` (ascending, non-empty) by linear interpolation
/// at 1-based position 1 + (m-1) q.
double sorted_quantile(std::span<const double> sorted, double q) noexcept;

}  // namespace dyadkde
