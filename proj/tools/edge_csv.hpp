#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadkde/dyadic_sample.hpp"

namespace dyadkde::cli {

/// Malformed file or unreadable path; maps to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Edge list read from `i,j,value` CSV with vertex labels mapped to 1..n.
struct EdgeTable {
  std::vector<EdgeRecord> records;  // 1-based ids
  std::vector<std::string> labels;  // labels[id - 1]
  std::size_t n = 0;
};

/// Labels are sorted numerically when all of them are integers, otherwise
/// lexicographically, and numbered from 1. With `vertex_count`, every label
/// must be an integer in 1..vertex_count and is used as the id directly, so
/// vertices without any row still count.
EdgeTable read_edge_csv(std::istream& in, std::optional<std::size_t> vertex_count = std::nullopt);
EdgeTable read_edge_csv_file(const std::string& path,
                             std::optional<std::size_t> vertex_count = std::nullopt);

/// Writes observed pairs of `sample` as `i,j,value` with 1-based ids.
void write_edge_csv(std::ostream& out, const DyadicSample& sample);

}  // namespace dyadkde::cli
