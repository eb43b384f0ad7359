#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "crossfeat/hashing.hpp"

namespace crossfeat {

// Every random draw in a run descends from one 64-bit config seed through
// named sub-streams, so components stay decoupled and runs replay exactly.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) {
  return mix64(seed ^ fnv1a64(stream, 0));
}

// splitmix64 generator: tiny state, portable sequence.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound). Modulo bias is negligible for bound << 2^64 and
  // keeps the sequence portable.
  std::uint64_t next_below(std::uint64_t bound) { return bound ? next() % bound : 0; }

  double next_unit() {  // [0,1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (one value per call, deterministic).
  double next_gaussian();

 private:
  std::uint64_t state_;
};

template <typename T>
void fisher_yates_shuffle(std::vector<T>& items, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace crossfeat
