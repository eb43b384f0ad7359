#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crossfeat/dataset.hpp"
#include "crossfeat/discretize.hpp"
#include "crossfeat/features.hpp"
#include "crossfeat/table.hpp"

namespace crossfeat {

inline constexpr std::uint32_t kArtifactVersion = 1;
inline constexpr char kArtifactMagic[4] = {'A', 'C', 'X', 'F'};

struct ArtifactMetadata {
  std::uint64_t seed = 0;
  double solution_auc = 0.0;
  double base_auc = 0.0;
  std::uint64_t iterations = 0;
  std::string stop_reason;
  // Wall-clock stamps would make refits non-reproducible; callers may record
  // a fixed build timestamp of their choosing (0 = unset).
  std::uint64_t timestamp = 0;

  bool operator==(const ArtifactMetadata&) const = default;
};

// The exported fill/discretize/hash/cross pipeline plus final model weights.
// Self-contained: no reference to training data. Weights quantize to 32-bit
// floats on save; `bias` and in-memory weights already hold the quantized
// values so that offline and artifact predictions agree bit-for-bit.
struct ProducerArtifact {
  std::uint32_t format_version = kArtifactVersion;
  FeatureSchema schema;
  FillRules fill;
  DiscretizationSpec disc;
  std::vector<BaseField> base_fields;
  HashConfig hash;
  FeatureSet feature_set;
  double bias = 0.0;
  std::vector<std::vector<float>> weights;  // dense, parallel to feature_set members
  ArtifactMetadata meta;
};

// Container layout (all integers little-endian):
//   magic "ACXF" | u32 format_version | u32 section_count |
//   per section: u32 name_len, name bytes, u64 payload_len, u32 crc32, payload
// Sections in order: "schema" (JSON), "rules" (JSON), "weights" (raw f32 LE).
void save_artifact(const ProducerArtifact& artifact, const std::string& path);
ProducerArtifact load_artifact(const std::string& path);

std::vector<std::uint8_t> artifact_to_bytes(const ProducerArtifact& artifact);
ProducerArtifact artifact_from_bytes(std::span<const std::uint8_t> bytes);

// One input cell, already typed. Missing numeric cells may carry NaN instead
// of the flag; either spelling is honored.
struct RawValue {
  double num = 0.0;
  std::string_view cat{};
  bool missing = false;
};

// Immutable execution plan for an artifact: fill -> discretize -> hash base
// fields -> hash crosses -> dot product. Share freely across threads; each
// thread owns a Scratch.
class Producer {
 public:
  explicit Producer(ProducerArtifact artifact);

  const ProducerArtifact& artifact() const { return artifact_; }
  std::size_t feature_count() const { return features_.size(); }
  std::size_t base_field_count() const { return artifact_.base_fields.size(); }

  struct Scratch {
    std::vector<std::uint32_t> base_buckets;
  };
  Scratch make_scratch() const;

  // Values ordered like artifact().schema.fields. out covers feature_count().
  void transform_row(std::span<const RawValue> row, Scratch& scratch,
                     std::span<std::uint32_t> out) const;
  double predict_row(std::span<const RawValue> row, Scratch& scratch) const;

  // Score an already-transformed row (buckets in feature order).
  double predict_buckets(std::span<const std::uint32_t> feature_buckets) const;

  Producer(const Producer&) = delete;
  Producer& operator=(const Producer&) = delete;

 private:
  struct FeaturePlan {
    std::uint64_t digest = 0;
    std::vector<std::uint16_t> ids;  // constituents
    const float* lane = nullptr;
  };

  void fill_base_buckets(std::span<const RawValue> row,
                         std::vector<std::uint32_t>& base) const;
  std::uint32_t plan_bucket(const FeaturePlan& plan,
                            const std::vector<std::uint32_t>& base) const;

  ProducerArtifact artifact_;
  std::vector<FeaturePlan> features_;
  std::vector<const FieldDiscretization*> base_disc_;  // per base field, null if categorical
};

struct LatencyReport {
  double p50_us = 0.0;
  double p95_us = 0.0;
  double p99_us = 0.0;
  double mean_us = 0.0;
  double rows_per_second = 0.0;
  std::size_t measured_rows = 0;
};

// Warm steady-state per-row transform+predict latency over `repetitions`
// passes of at least 1000 rows.
LatencyReport bench_latency(const Producer& producer,
                            const std::vector<std::vector<RawValue>>& rows,
                            std::size_t repetitions);

}  // namespace crossfeat
