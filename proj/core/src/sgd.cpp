#include "crossfeat/sgd.hpp"

#include <bit>
#include <cmath>

#include "crossfeat/error.hpp"

namespace crossfeat {

SgdTrainer::SgdTrainer(const EncodedDataset& data, const HashConfig& cfg,
                       std::vector<CrossFeature> features, const SgdOptions& opt,
                       std::vector<FieldWeights> warm, double bias0,
                       const std::vector<double>* bsum)
    : data_(data),
      cfg_(cfg),
      features_(std::move(features)),
      opt_(opt),
      bias_(bias0),
      bsum_(bsum),
      regularized_(opt.l1 > 0.0 || opt.l2 > 0.0),
      l1_step_(opt.alpha * opt.l1) {
  if (features_.empty()) throw Error(Errc::bad_argument, "no features to train");
  if (opt_.batch_size == 0) throw Error(Errc::bad_argument, "batch_size must be positive");
  if (bsum_ && bsum_->size() != data_.rows()) {
    throw Error(Errc::bad_argument, "bsum lane length does not match dataset");
  }
  digests_.reserve(features_.size());
  for (const auto& f : features_) digests_.push_back(f.digest(cfg_));

  if (!warm.empty()) {
    if (warm.size() != features_.size()) {
      throw Error(Errc::bad_argument, "warm weights do not match feature list");
    }
    weights_ = std::move(warm);
    // Warm weights are final values from an earlier call: current as of step 0.
    for (auto& fw : weights_) {
      for (std::uint32_t b : fw.live_buckets()) fw.slot(b).last_step = 0;
    }
  } else {
    weights_.reserve(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) {
      weights_.emplace_back(cfg_.bucket_count);
    }
  }

  bucket_scratch_.assign(features_.size(), std::vector<std::uint32_t>(opt_.batch_size));
  resid_.assign(opt_.batch_size, 0.0);
  accum_table_.assign(std::bit_ceil(opt_.batch_size * 4), AccumCell{});
  accum_entries_.reserve(opt_.batch_size);
}

void SgdTrainer::catch_up(FieldWeights::Slot& s) const {
  std::uint32_t gap = step_ - s.last_step;
  if (gap == 0) return;
  double w = s.w;
  if (w != 0.0) {
    for (std::uint32_t i = 0; i < gap; ++i) {
      w = w - opt_.alpha * (opt_.l2 * w);
      w = soft_threshold(w);
      if (w == 0.0) break;
    }
  }
  s.w = w;
  s.last_step = step_;
}

double& SgdTrainer::touch(std::size_t f, std::uint32_t bucket) {
  FieldWeights::Slot& s = weights_[f].slot(bucket);
  if (regularized_ && s.last_step != step_) catch_up(s);
  return s.w;
}

void SgdTrainer::accum_begin() {
  ++accum_epoch_;
  accum_entries_.clear();
}

void SgdTrainer::accum_add(std::uint32_t bucket, double v) {
  const std::size_t mask = accum_table_.size() - 1;
  std::size_t i = static_cast<std::size_t>(mix64(bucket)) & mask;
  while (true) {
    AccumCell& c = accum_table_[i];
    if (c.epoch != accum_epoch_) {
      c.epoch = accum_epoch_;
      c.key = bucket;
      c.entry = static_cast<std::uint32_t>(accum_entries_.size());
      accum_entries_.emplace_back(bucket, v);
      return;
    }
    if (c.key == bucket) {
      accum_entries_[c.entry].second += v;
      return;
    }
    i = (i + 1) & mask;
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

void SgdTrainer::run_block(const RowRange& block) {
  if (finished_) throw Error(Errc::bad_argument, "trainer already finished");
  const std::size_t nfeat = features_.size();
  for (std::size_t start = block.begin; start < block.end; start += opt_.batch_size) {
    const std::size_t stop = std::min(start + opt_.batch_size, block.end);
    const std::size_t batch_n = stop - start;
    const double inv_n = 1.0 / static_cast<double>(batch_n);

    for (std::size_t f = 0; f < nfeat; ++f) {
      auto& scratch = bucket_scratch_[f];
      for (std::size_t i = 0; i < batch_n; ++i) {
        scratch[i] = feature_bucket(data_, start + i, features_[f], cfg_, digests_[f]);
      }
    }

    double resid_sum = 0.0;
    for (std::size_t i = 0; i < batch_n; ++i) {
      double z = bias_;
      if (bsum_) z += (*bsum_)[start + i];
      for (std::size_t f = 0; f < nfeat; ++f) z += touch(f, bucket_scratch_[f][i]);
      double r = sigmoid(z) - static_cast<double>(data_.labels[start + i]);
      resid_[i] = r;
      resid_sum += r;
    }

    for (std::size_t f = 0; f < nfeat; ++f) {
      accum_begin();
      const auto& scratch = bucket_scratch_[f];
      for (std::size_t i = 0; i < batch_n; ++i) accum_add(scratch[i], resid_[i]);
      for (const auto& [bucket, g_sum] : accum_entries_) {
        FieldWeights::Slot& s = weights_[f].slot(bucket);  // current: touched this batch
        double w = s.w;
        w = w - opt_.alpha * (g_sum * inv_n + opt_.l2 * w);
        s.w = soft_threshold(w);
        s.last_step = step_ + 1;
      }
    }

    if (opt_.train_bias) bias_ -= opt_.alpha * (resid_sum * inv_n);
    ++step_;
  }
}

void SgdTrainer::run_blocks(std::span<const RowRange> blocks) {
  for (const auto& b : blocks) run_block(b);
}

void SgdTrainer::finish() {
  if (finished_) return;
  if (regularized_) {
    for (auto& fw : weights_) {
      for (std::uint32_t b : fw.live_buckets()) catch_up(fw.slot(b));
    }
  }
  finished_ = true;
}

std::vector<FieldWeights> SgdTrainer::take_weights() {
  finish();
  return std::move(weights_);
}

}  // namespace crossfeat
