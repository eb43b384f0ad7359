#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "crossfeat/blocks.hpp"
#include "crossfeat/dataset.hpp"
#include "crossfeat/lr.hpp"

namespace crossfeat {

enum class StopReason {
  max_features,
  performance,
  max_runtime,
  empty_children,
  interrupted,
};

const char* stop_reason_name(StopReason r);

struct TerminationConfig {
  std::optional<double> max_runtime_seconds;
  std::optional<std::size_t> max_cross_features;
  bool performance_guard = true;  // always bounds the run together with the
                                  // finite cross-feature space
};

struct CandidateArm {
  CrossFeature cross;
  FieldWeights weights;            // warm state carried across rounds
  std::size_t blocks_consumed = 0;
  double current_auc = 0.5;
};

// Per-call accounting, used by tests and the progress log.
struct SmbgdStats {
  std::vector<std::vector<std::size_t>> round_blocks;   // fresh block ids per round
  std::vector<std::size_t> round_survivor_counts;       // arms entering each round
  std::size_t arm_block_pulls = 0;                      // total (arm, block) trainings
};

struct SearchData {
  const EncodedDataset* train = nullptr;
  const EncodedDataset* valid = nullptr;
  const HashConfig* hash = nullptr;
  BlockRule block_rule;
  std::size_t workers = 1;
};

// Successive halving over candidate crosses: round k trains every surviving
// arm field-wise on the next 2^k fresh blocks with warm-starting, scores by
// validation AUC, and keeps the top floor(count/2) (at least one). Ties favor
// lower-order crosses, then lexicographic constituents. Returns nullopt only
// when interrupted.
std::optional<CandidateArm> smbgd(std::vector<CandidateArm> arms, const SearchData& data,
                                  const BlockPartition& partition, const BsumCache& bsum,
                                  const LRHyperParams& hyper, SmbgdStats* stats = nullptr,
                                  const std::atomic<bool>* stop = nullptr);

struct HistoryEntry {
  std::size_t iteration = 0;
  double elapsed_seconds = 0.0;
  std::size_t candidates = 0;
  std::string winner;
  double validation_auc = 0.0;
};

struct SearchState {
  FeatureSet solution;
  LRModel model;
  double validation_auc = 0.0;
  double base_auc = 0.0;       // original-features model
  std::size_t iteration = 0;
  double elapsed_seconds = 0.0;
  std::vector<HistoryEntry> history;
  StopReason stop_reason = StopReason::empty_children;
  std::vector<SmbgdStats> smbgd_trace;
};

// Width-1 beam search: expand the current solution, let SMBGD pick the best
// new cross, retrain the full model, and adopt unless the validation AUC
// degrades (performance guard reverts and stops). Emits one NDJSON record per
// adopted iteration to `progress` when given. `stop` interrupts at the next
// round/iteration boundary, discarding in-flight work.
SearchState beam_search(const SearchData& data, std::span<const std::string> base_names,
                        const TerminationConfig& term, const LRHyperParams& hyper,
                        std::ostream* progress = nullptr,
                        const std::atomic<bool>* stop = nullptr);

}  // namespace crossfeat
