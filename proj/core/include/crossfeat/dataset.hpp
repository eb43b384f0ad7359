#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crossfeat/discretize.hpp"
#include "crossfeat/features.hpp"
#include "crossfeat/hashing.hpp"
#include "crossfeat/table.hpp"

namespace crossfeat {

// One post-discretization categorical field. Categorical sources keep
// granularity 0; numeric sources get one base field per kept granularity.
struct BaseField {
  std::string name;            // e.g. "job" or "age@100"
  std::size_t source_field = 0;  // schema field index
  std::uint32_t granularity = 0;

  bool operator==(const BaseField&) const = default;
};

std::string base_field_name(const FeatureSchema& schema, std::size_t field_index,
                            std::uint32_t granularity);

// Hashed representation of a split: per base field, one bucket id per row.
// Immutable once encoded; cross buckets derive from these on the fly.
struct EncodedDataset {
  std::vector<std::vector<std::uint32_t>> buckets;  // [base field][row]
  std::vector<std::uint8_t> labels;

  std::size_t rows() const { return labels.size(); }
  std::size_t field_count() const { return buckets.size(); }
};

// Bucket of one feature (base or cross) for one row of `data`.
inline std::uint32_t feature_bucket(const EncodedDataset& data, std::size_t row,
                                    const CrossFeature& feature, const HashConfig& cfg,
                                    std::uint64_t digest) {
  auto ids = feature.constituents();
  if (ids.size() == 1) return data.buckets[ids[0]][row];
  std::uint64_t h = digest;
  for (std::uint16_t id : ids) {
    h = mix64(h ^ (static_cast<std::uint64_t>(data.buckets[id][row]) + 1));
  }
  return static_cast<std::uint32_t>(h) & cfg.mask();
}

// Derives the base-field list from a filled table and a discretization spec
// (schema order; numeric fields expand to their kept levels ascending).
std::vector<BaseField> make_base_fields(const FeatureSchema& schema,
                                        const DiscretizationSpec& disc);

// Hash-encodes a filled table into per-base-field bucket columns.
EncodedDataset encode_dataset(const RawTable& filled, std::span<const BaseField> base_fields,
                              const DiscretizationSpec& disc, const HashConfig& cfg);

std::vector<std::string> base_field_names(std::span<const BaseField> base_fields);

}  // namespace crossfeat
