#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "crossfeat/preprocess.hpp"
#include "crossfeat/producer.hpp"
#include "crossfeat/search.hpp"
#include "crossfeat/tune.hpp"

namespace crossfeat {

struct RunConfig {
  std::uint64_t seed = 42;
  double validation_fraction = 0.2;
  std::optional<double> max_runtime_seconds;
  std::optional<std::size_t> max_cross_features;
  bool performance_guard = true;
  std::uint32_t bucket_count = 1u << 18;
  std::vector<std::uint32_t> granularities;  // empty = rule default
  std::size_t small_data_threshold = 500'000;
  // Expert keys.
  std::size_t batch_size = 256;
  std::optional<LRHyperParams> hyper_override;  // skips tuning when set
  std::uint64_t artifact_timestamp = 0;

  std::size_t workers = 0;  // 0 = logical cores; set by the CLI flag
};

// Strict parse: unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config_file(const std::string& path);

struct FitResult {
  ProducerArtifact artifact;
  SearchState search;
  TuneResult tune;
  std::vector<std::string> base_field_names;
};

FitResult fit(const RawTable& training_table, const RunConfig& config,
              std::ostream* progress_log = nullptr,
              const std::atomic<bool>* interrupt = nullptr);

// Converts parsed CSV cells (data rows only, schema column order) into typed
// raw rows for the producer. Storage keeps the backing strings alive.
struct RawRowBatch {
  std::vector<std::vector<std::string>> storage;  // categorical cell text
  std::vector<std::vector<RawValue>> rows;
};
RawRowBatch raw_rows_from_table(const RawTable& table);

}  // namespace crossfeat
