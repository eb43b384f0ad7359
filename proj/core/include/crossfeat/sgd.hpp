#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crossfeat/blocks.hpp"
#include "crossfeat/dataset.hpp"
#include "crossfeat/features.hpp"
#include "crossfeat/weights.hpp"

namespace crossfeat {

struct SgdOptions {
  double alpha = 0.1;
  double l1 = 0.0;
  double l2 = 0.0;
  std::size_t batch_size = 256;
  bool train_bias = true;
};

// Mini-batch SGD on hashed one-hot fields.
//
// Per batch, for every touched bucket: w <- w - alpha*(g_avg + l2*w), then the
// L1 proximal step w <- soft(w, alpha*l1). Untouched nonzero weights owe the
// same decay map per elapsed step; they are caught up lazily (stamped per
// slot) and the catch-up replays the per-step map one step at a time, so the
// result is bit-identical to applying it eagerly every batch. Mini-batches
// never span block boundaries, which is what makes training on blocks P then
// Q with warm-start identical to one pass over P||Q.
class SgdTrainer {
 public:
  SgdTrainer(const EncodedDataset& data, const HashConfig& cfg,
             std::vector<CrossFeature> features, const SgdOptions& opt,
             std::vector<FieldWeights> warm = {}, double bias0 = 0.0,
             const std::vector<double>* bsum = nullptr);

  void run_block(const RowRange& block);
  void run_blocks(std::span<const RowRange> blocks);

  // Flushes pending regularization; weights are final afterwards.
  void finish();

  double bias() const { return bias_; }
  std::uint32_t steps() const { return step_; }
  std::vector<FieldWeights> take_weights();
  const std::vector<FieldWeights>& weights() const { return weights_; }

 private:
  double& touch(std::size_t f, std::uint32_t bucket);
  void catch_up(FieldWeights::Slot& s) const;
  double soft_threshold(double w) const {
    if (w > l1_step_) return w - l1_step_;
    if (w < -l1_step_) return w + l1_step_;
    return 0.0;
  }

  const EncodedDataset& data_;
  HashConfig cfg_;
  std::vector<CrossFeature> features_;
  std::vector<std::uint64_t> digests_;
  SgdOptions opt_;
  std::vector<FieldWeights> weights_;
  double bias_;
  const std::vector<double>* bsum_;
  bool regularized_;
  double l1_step_;  // alpha * l1

  std::uint32_t step_ = 0;
  bool finished_ = false;

  // batch scratch
  std::vector<std::vector<std::uint32_t>> bucket_scratch_;  // [feature][row in batch]
  std::vector<double> resid_;

  // insertion-ordered per-batch gradient accumulator
  struct AccumCell {
    std::uint32_t epoch = 0;
    std::uint32_t key = 0;
    std::uint32_t entry = 0;
  };
  std::vector<AccumCell> accum_table_;
  std::vector<std::pair<std::uint32_t, double>> accum_entries_;
  std::uint32_t accum_epoch_ = 0;
  void accum_begin();
  void accum_add(std::uint32_t bucket, double v);
};

}  // namespace crossfeat
