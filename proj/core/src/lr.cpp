#include "crossfeat/lr.hpp"

#include "crossfeat/auc.hpp"
#include "crossfeat/error.hpp"
#include "crossfeat/sgd.hpp"

namespace crossfeat {

const FieldWeights* LRModel::weights_for(const CrossFeature& f) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i] == f) return &weights[i];
  }
  return nullptr;
}

LRModel make_zero_model(const FeatureSet& set, const HashConfig& cfg,
                        const LRHyperParams& hyper) {
  LRModel m;
  m.features.assign(set.members().begin(), set.members().end());
  m.weights.reserve(m.features.size());
  m.digests.reserve(m.features.size());
  for (const auto& f : m.features) {
    m.weights.emplace_back(cfg.bucket_count);
    m.digests.push_back(f.digest(cfg));
  }
  m.hyper = hyper;
  m.bucket_count = cfg.bucket_count;
  return m;
}

double model_logit(const LRModel& model, const EncodedDataset& data, std::size_t row,
                   const HashConfig& cfg) {
  double z = model.bias;
  for (std::size_t i = 0; i < model.features.size(); ++i) {
    const auto ids = model.features[i].constituents();
    if (!ids.empty() && ids.back() >= data.field_count()) {
      throw Error(Errc::field_mismatch, "row does not cover a model field");
    }
    z += model.weights[i].get(feature_bucket(data, row, model.features[i], cfg, model.digests[i]));
  }
  return z;
}

double predict(const LRModel& model, const EncodedDataset& data, std::size_t row,
               const HashConfig& cfg) {
  return sigmoid(model_logit(model, data, row, cfg));
}

EvalMetric evaluate_model(const LRModel& model, const EncodedDataset& data,
                          const HashConfig& cfg) {
  std::vector<double> probs(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) probs[r] = predict(model, data, r, cfg);
  EvalMetric m;
  m.auc = auc(probs, data.labels, &m.degenerate_labels);
  m.logloss = mean_logloss(probs, data.labels);
  return m;
}

std::pair<LRModel, EvalMetric> train_full(const EncodedDataset& train,
                                          const BlockPartition& partition,
                                          const EncodedDataset& valid, const FeatureSet& set,
                                          const HashConfig& cfg, const LRHyperParams& hyper,
                                          const TrainFullOptions& opts) {
  if (train.rows() == 0) throw Error(Errc::bad_argument, "empty training data");
  if (partition.rows() != train.rows()) {
    throw Error(Errc::bad_argument, "partition does not cover the training split");
  }

  SgdOptions so{hyper.alpha, hyper.l1, hyper.l2, hyper.batch_size, !opts.freeze_bias};
  std::vector<CrossFeature> feats(set.members().begin(), set.members().end());
  SgdTrainer trainer(train, cfg, feats, so, {}, opts.bias0);
  for (std::size_t e = 0; e < std::max<std::size_t>(opts.epochs, 1); ++e) {
    trainer.run_blocks(partition.blocks);
  }

  LRModel model;
  model.bias = trainer.bias();
  model.features = std::move(feats);
  model.weights = trainer.take_weights();
  model.digests.reserve(model.features.size());
  for (const auto& f : model.features) model.digests.push_back(f.digest(cfg));
  model.hyper = hyper;
  model.bucket_count = cfg.bucket_count;

  EvalMetric metric = evaluate_model(model, valid, cfg);
  model.degenerate_labels = metric.degenerate_labels;
  return {std::move(model), metric};
}

FieldWeights train_field_wise(const EncodedDataset& train, const BlockPartition& partition,
                              const CrossFeature& candidate,
                              std::span<const std::size_t> block_ids, const BsumCache& bsum,
                              std::uint64_t expected_stamp, const FieldWeights* warm,
                              const HashConfig& cfg, const LRHyperParams& hyper) {
  if (bsum.stamp != expected_stamp) {
    throw Error(Errc::stale_bsum, "bsum lane updated since this arm was scheduled");
  }
  if (bsum.train.size() != train.rows()) {
    throw Error(Errc::bad_argument, "bsum lane does not match training split");
  }

  SgdOptions so{hyper.alpha, hyper.l1, hyper.l2, hyper.batch_size, /*train_bias=*/false};
  std::vector<FieldWeights> warm_vec;
  if (warm) warm_vec.push_back(*warm);
  SgdTrainer trainer(train, cfg, {candidate}, so, std::move(warm_vec), 0.0, &bsum.train);
  for (std::size_t id : block_ids) trainer.run_block(partition.blocks.at(id));
  return std::move(trainer.take_weights().front());
}

double fieldwise_validation_auc(const EncodedDataset& valid, const CrossFeature& candidate,
                                const FieldWeights& w, const BsumCache& bsum,
                                const HashConfig& cfg) {
  if (bsum.valid.size() != valid.rows()) {
    throw Error(Errc::bad_argument, "bsum lane does not match validation split");
  }
  const std::uint64_t digest = candidate.digest(cfg);
  std::vector<double> scores(valid.rows());
  for (std::size_t r = 0; r < valid.rows(); ++r) {
    scores[r] = bsum.valid[r] + w.get(feature_bucket(valid, r, candidate, cfg, digest));
  }
  return auc(scores, valid.labels);
}

}  // namespace crossfeat
