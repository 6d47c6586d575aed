#include "dyadkde/rng.hpp"

#include <cmath>
#include <numbers>

namespace dyadkde {

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t k) const noexcept {
  const double u1 = uniform(2 * k);
  const double u2 = uniform(2 * k + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CounterRng replication_stream(std::uint64_t base_seed, std::uint64_t rep_index, StreamRole role) {
  return CounterRng(mix64(base_seed)).split(rep_index).split(static_cast<std::uint64_t>(role));
}

}  // namespace dyadkde
