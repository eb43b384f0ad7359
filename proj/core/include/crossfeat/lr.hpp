#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crossfeat/blocks.hpp"
#include "crossfeat/dataset.hpp"
#include "crossfeat/features.hpp"
#include "crossfeat/weights.hpp"

namespace crossfeat {

struct LRHyperParams {
  double alpha = 0.1;   // learning rate
  double l1 = 0.0;
  double l2 = 0.0;
  std::size_t batch_size = 256;

  bool operator==(const LRHyperParams&) const = default;
};

struct EvalMetric {
  double auc = 0.5;
  double logloss = 0.0;
  bool degenerate_labels = false;
};

// Logistic model over a feature set: global bias plus one weight subvector
// per member (base fields and crosses alike).
struct LRModel {
  double bias = 0.0;
  std::vector<CrossFeature> features;   // canonical member order
  std::vector<FieldWeights> weights;    // parallel to features
  std::vector<std::uint64_t> digests;   // cached cross digests, parallel
  LRHyperParams hyper;
  std::uint32_t bucket_count = 0;
  bool degenerate_labels = false;

  const FieldWeights* weights_for(const CrossFeature& f) const;
};

LRModel make_zero_model(const FeatureSet& set, const HashConfig& cfg,
                        const LRHyperParams& hyper);

double sigmoid(double z);

// Raw score and probability for one row of an encoded dataset.
double model_logit(const LRModel& model, const EncodedDataset& data, std::size_t row,
                   const HashConfig& cfg);
double predict(const LRModel& model, const EncodedDataset& data, std::size_t row,
               const HashConfig& cfg);

struct TrainFullOptions {
  bool freeze_bias = false;
  double bias0 = 0.0;
  std::size_t epochs = 1;
};

// Mini-batch SGD over all partition blocks in order (batches never span block
// boundaries), squared-L2 gradient term plus an L1 proximal soft-threshold.
// Returns the model quantized weights untouched (doubles); metric is computed
// on the validation split.
std::pair<LRModel, EvalMetric> train_full(const EncodedDataset& train,
                                          const BlockPartition& partition,
                                          const EncodedDataset& valid, const FeatureSet& set,
                                          const HashConfig& cfg, const LRHyperParams& hyper,
                                          const TrainFullOptions& opts = {});

// Trains only the candidate's weights against the frozen bsum lane: one pass
// over the listed blocks, resuming from `warm` when given. `expected_stamp`
// must match the cache stamp the caller scheduled against.
FieldWeights train_field_wise(const EncodedDataset& train, const BlockPartition& partition,
                              const CrossFeature& candidate, std::span<const std::size_t> block_ids,
                              const BsumCache& bsum, std::uint64_t expected_stamp,
                              const FieldWeights* warm, const HashConfig& cfg,
                              const LRHyperParams& hyper);

// Validation metric of a partially trained arm: score = w_c[bucket] + bsum.
double fieldwise_validation_auc(const EncodedDataset& valid, const CrossFeature& candidate,
                                const FieldWeights& w, const BsumCache& bsum,
                                const HashConfig& cfg);

EvalMetric evaluate_model(const LRModel& model, const EncodedDataset& data, const HashConfig& cfg);

}  // namespace crossfeat
