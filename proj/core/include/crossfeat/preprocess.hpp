#pragma once

#include <cstdint>
#include <vector>

#include "crossfeat/blocks.hpp"
#include "crossfeat/dataset.hpp"
#include "crossfeat/discretize.hpp"
#include "crossfeat/lr.hpp"
#include "crossfeat/table.hpp"

namespace crossfeat {

// Scores one discretization candidate of a numeric column: a single-field LR
// (bias plus that field's weights, no bsum term) trained with one SGD pass
// over at most the first two preprocessing blocks and scored by validation
// AUC.
struct GranularityScore {
  std::uint32_t granularity = 0;
  double validation_auc = 0.5;
};

// Keeps the best ceil(count/2) granularities of one numeric column; equal
// scores favor the coarser granularity.
std::vector<std::uint32_t> filter_granularities(const std::vector<GranularityScore>& scored);

// Fill -> discretize at every requested granularity -> keep the best half per
// numeric column -> hash-encode both splits with the final dense base ids.
struct PreprocessResult {
  FillRules fill;
  DiscretizationSpec disc;
  std::vector<BaseField> base_fields;
  EncodedDataset train;
  EncodedDataset valid;
  std::vector<GranularityScore> filter_trace;  // per numeric field, all levels
};

struct PreprocessOptions {
  std::vector<std::uint32_t> granularities;  // empty = rule default
  std::size_t batch_size = 256;
  BlockRule block_rule;
  std::size_t workers = 1;
};

PreprocessResult preprocess(RawTable& train_split, RawTable& valid_split, const HashConfig& cfg,
                            const PreprocessOptions& opts);

}  // namespace crossfeat
