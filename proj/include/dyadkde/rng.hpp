#pragma once

#include <cstdint>

namespace dyadkde {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless counter-based generator: draw k is a pure function of (key, k),
/// so any draw can be reproduced without replaying the ones before it.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key() const noexcept { return key_; }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGolden);
  }

  /// Uniform on (0, 1); never returns 0 or 1.
  double uniform(std::uint64_t counter) const noexcept;

  /// Standard normal from the Box-Muller cosine branch on counters 2k and 2k+1.
  double normal(std::uint64_t k) const noexcept;

  /// Independent child generator, e.g. one per replication.
  CounterRng split(std::uint64_t child) const noexcept {
    return CounterRng(mix64(key_ ^ mix64(child + kGolden)));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
};

/// Roles that keep the simulation's random inputs in separate streams, so the
/// edge values of a replication do not depend on the observation probability.
enum class StreamRole : std::uint64_t { VertexShock = 1, PairShock = 2, Observation = 3 };

CounterRng replication_stream(std::uint64_t base_seed, std::uint64_t rep_index, StreamRole role);

}  // namespace dyadkde
