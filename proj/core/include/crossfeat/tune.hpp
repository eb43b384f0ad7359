#pragma once

#include <cstddef>
#include <vector>

#include "crossfeat/lr.hpp"

namespace crossfeat {

// Log-spaced grid endpoints inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

struct TuneResult {
  LRHyperParams best;
  double best_auc = 0.0;
  std::size_t evaluated = 0;
};

// Full 6x6x6 log-grid search over alpha in [0.005,1], l1 and l2 in [1e-4,10].
// Every combination trains one full LR on the given feature set and is scored
// by validation AUC; the winning tuple is reused for every LR thereafter.
TuneResult tune_hyperparams(const EncodedDataset& train, const BlockPartition& partition,
                            const EncodedDataset& valid, const FeatureSet& originals,
                            const HashConfig& cfg, std::size_t batch_size,
                            std::size_t workers = 1);

}  // namespace crossfeat
