#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "crossfeat/error.hpp"

namespace crossfeat {

// All bucket assignment flows through two named 64-bit hashes:
//   - FNV-1a for category tokens (byte streams),
//   - the splitmix64 finalizer for integer tuples (bins, cross constituents).
// Both are fixed by the artifact format; changing either breaks replay.

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis ^ 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct HashConfig {
  std::uint32_t bucket_count = 1u << 18;  // power of two
  std::uint64_t seed = 0;

  void validate() const {
    if (bucket_count < 2 || (bucket_count & (bucket_count - 1)) != 0) {
      throw Error(Errc::bad_config, "bucket_count must be a power of two >= 2");
    }
  }
  std::uint32_t mask() const { return bucket_count - 1; }
};

namespace hash_tag {
inline constexpr std::uint64_t base = 0x42415345u;   // token/bin -> base bucket
inline constexpr std::uint64_t cross = 0x43524f53u;  // constituent digest chain
}  // namespace hash_tag

inline std::uint64_t base_field_basis(const HashConfig& cfg, std::uint32_t field_index) {
  return mix64(mix64(cfg.seed ^ hash_tag::base) ^ field_index);
}

// Bucket for a categorical token of one base field.
inline std::uint32_t hash_base_token(const HashConfig& cfg, std::uint32_t field_index,
                                     std::string_view token) {
  return static_cast<std::uint32_t>(fnv1a64(token, base_field_basis(cfg, field_index))) &
         cfg.mask();
}

// Bucket for a discretized bin of one base field.
inline std::uint32_t hash_base_bin(const HashConfig& cfg, std::uint32_t field_index,
                                   std::uint64_t bin) {
  return static_cast<std::uint32_t>(mix64(base_field_basis(cfg, field_index) ^ (bin + 1))) &
         cfg.mask();
}

// Digest of a cross feature's canonically sorted constituent ids.
inline std::uint64_t cross_digest(const HashConfig& cfg, std::span<const std::uint16_t> ids) {
  std::uint64_t h = mix64(cfg.seed ^ hash_tag::cross);
  for (std::uint16_t id : ids) h = mix64(h ^ (static_cast<std::uint64_t>(id) + 1));
  return h;
}

// Bucket of a cross feature given its constituents' base buckets, listed in
// canonical constituent order. One hot bucket per row, collisions permitted.
inline std::uint32_t hash_cross_buckets(const HashConfig& cfg, std::uint64_t digest,
                                        std::span<const std::uint32_t> buckets) {
  std::uint64_t h = digest;
  for (std::uint32_t b : buckets) h = mix64(h ^ (static_cast<std::uint64_t>(b) + 1));
  return static_cast<std::uint32_t>(h) & cfg.mask();
}

}  // namespace crossfeat
