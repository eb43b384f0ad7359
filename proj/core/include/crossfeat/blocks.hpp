#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crossfeat/dataset.hpp"

namespace crossfeat {

struct LRModel;  // lr.hpp
class FeatureSet;

struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const RowRange&) const = default;
};

struct BlockRule {
  // Datasets below the threshold budget 2x the successive-halving block sum
  // (<= 50% of rows at full depth); larger ones 5x (<= 20%).
  std::size_t small_data_threshold = 500'000;
};

// Equal-size (+-1 row) division of the training split into N blocks sized for
// n simultaneous candidates.
struct BlockPartition {
  std::size_t block_count = 0;
  std::vector<RowRange> blocks;
  std::vector<std::string> warnings;  // e.g. N reduced to the row count

  std::size_t rows() const { return blocks.empty() ? 0 : blocks.back().end; }
};

// Sum of fresh blocks successive halving may consume for n candidates:
// 2^ceil(log2 n) - 1, with a floor of one round for n = 1.
std::size_t halving_block_budget(std::size_t n_candidates);

BlockPartition partition_blocks(std::size_t train_rows, std::size_t n_candidates,
                                const BlockRule& rule = {});

// Frozen partial scores: bsum[row] = bias + sum over solution features of the
// weight at that row's bucket. Written only between beam iterations; the
// stamp guards field-wise training against stale lanes.
struct BsumCache {
  std::vector<double> train;
  std::vector<double> valid;
  std::uint64_t stamp = 0;
};

// Recomputes the lanes for the listed training blocks (all blocks if the list
// is empty) and for the whole validation split.
void update_bsum(BsumCache& cache, const EncodedDataset& train, const EncodedDataset& valid,
                 const BlockPartition& partition, const LRModel& model,
                 const FeatureSet& solution, std::span<const std::size_t> block_ids,
                 const HashConfig& cfg, std::size_t workers = 1);

}  // namespace crossfeat
