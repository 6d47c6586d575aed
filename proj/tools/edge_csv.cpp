#include "edge_csv.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

namespace dyadkde::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<long long> as_integer(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> as_real(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const std::string copy(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || errno == ERANGE) return std::nullopt;
  return v;
}

struct RawRow {
  std::string i;
  std::string j;
  double value;
};

}  // namespace

EdgeTable read_edge_csv(std::istream& in, std::optional<std::size_t> vertex_count) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split_fields(view);
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "i" || fields[1] != "j" || fields[2] != "value") {
        throw InputError("line " + std::to_string(line_no) + ": expected header 'i,j,value'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw InputError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                       std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw InputError("line " + std::to_string(line_no) + ": empty vertex label");
    }
    const auto value = as_real(fields[2]);
    if (!value) {
      throw InputError("line " + std::to_string(line_no) + ": bad value '" +
                       std::string(fields[2]) + "'");
    }
    rows.push_back({std::string(fields[0]), std::string(fields[1]), *value});
  }
  if (!have_header) throw InputError("empty input: expected header 'i,j,value'");

  EdgeTable table;
  if (vertex_count) {
    table.n = *vertex_count;
    table.labels.resize(table.n);
    for (std::size_t k = 0; k < table.n; ++k) table.labels[k] = std::to_string(k + 1);
    auto id_of = [&](const std::string& label) -> std::size_t {
      const auto v = as_integer(label);
      if (!v || *v < 1 || static_cast<std::size_t>(*v) > table.n) {
        throw InputError("vertex '" + label + "' is not an integer id in 1.." +
                         std::to_string(table.n));
      }
      return static_cast<std::size_t>(*v);
    };
    for (const auto& r : rows) table.records.push_back({id_of(r.i), id_of(r.j), r.value});
    return table;
  }

  std::vector<std::string> labels;
  for (const auto& r : rows) {
    labels.push_back(r.i);
    labels.push_back(r.j);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const bool numeric = std::all_of(labels.begin(), labels.end(),
                                   [](const std::string& s) { return as_integer(s).has_value(); });
  if (numeric) {
    std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
      return *as_integer(a) < *as_integer(b);
    });
    // "01" and "1" name the same vertex
    labels.erase(std::unique(labels.begin(), labels.end(),
                             [](const std::string& a, const std::string& b) {
                               return *as_integer(a) == *as_integer(b);
                             }),
                 labels.end());
  }
  std::map<std::string, std::size_t> ids;
  for (std::size_t k = 0; k < labels.size(); ++k) ids[labels[k]] = k + 1;
  auto id_of = [&](const std::string& label) -> std::size_t {
    if (auto it = ids.find(label); it != ids.end()) return it->second;
    const long long v = *as_integer(label);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (*as_integer(labels[k]) == v) return k + 1;
    }
    return 0;
  };
  table.n = labels.size();
  table.labels = labels;
  for (const auto& r : rows) table.records.push_back({id_of(r.i), id_of(r.j), r.value});
  return table;
}

EdgeTable read_edge_csv_file(const std::string& path, std::optional<std::size_t> vertex_count) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_edge_csv(in, vertex_count);
}

void write_edge_csv(std::ostream& out, const DyadicSample& sample) {
  out << "i,j,value\n";
  char buf[64];
  for (const auto& e : sample.to_edge_list()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.value);
    out << e.i << ',' << e.j << ',' << buf << '\n';
  }
}

}  // namespace dyadkde::cli
