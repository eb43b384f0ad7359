#include "crossfeat/preprocess.hpp"

#include <algorithm>

#include "crossfeat/auc.hpp"
#include "crossfeat/error.hpp"
#include "crossfeat/parallel.hpp"
#include "crossfeat/sgd.hpp"

namespace crossfeat {

namespace {

// Fixed internal hyper-parameters for the granularity filter: it runs before
// tuning and only has to rank a handful of binnings of the same column.
constexpr double kFilterAlpha = 0.1;
constexpr double kFilterL1 = 1e-4;
constexpr double kFilterL2 = 1e-4;

}  // namespace

std::vector<std::uint32_t> filter_granularities(const std::vector<GranularityScore>& scored) {
  if (scored.empty()) throw Error(Errc::bad_argument, "no granularity candidates");
  std::vector<GranularityScore> ranked = scored;
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.validation_auc != b.validation_auc) return a.validation_auc > b.validation_auc;
    return a.granularity < b.granularity;  // ties: coarser first
  });
  const std::size_t keep = (ranked.size() + 1) / 2;
  std::vector<std::uint32_t> kept;
  kept.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) kept.push_back(ranked[i].granularity);
  std::sort(kept.begin(), kept.end());
  return kept;
}

PreprocessResult preprocess(RawTable& train_split, RawTable& valid_split, const HashConfig& cfg,
                            const PreprocessOptions& opts) {
  cfg.validate();
  PreprocessResult result;
  result.fill = fill_missing(train_split);
  apply_fill(valid_split, result.fill);

  std::vector<std::uint32_t> levels = opts.granularities;
  if (levels.empty()) levels = default_granularities(train_split.rows());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (!levels.empty() && levels.front() == 0) {
    throw Error(Errc::bad_config, "granularity levels must be positive");
  }

  const FeatureSchema& schema = train_split.schema;

  // Candidate spec: every numeric column at every level.
  DiscretizationSpec all_levels;
  for (std::size_t i = 0; i < schema.fields.size(); ++i) {
    if (schema.fields[i].kind != FieldKind::numerical) continue;
    const auto& values = std::get<NumericColumn>(train_split.columns[i]).values;
    all_levels.numeric_fields.push_back({i, binning_from_training(values), levels});
  }

  DiscretizationSpec kept = all_levels;
  if (!all_levels.numeric_fields.empty() && levels.size() > 1) {
    // Budget: one pass over at most the first two preprocessing blocks,
    // partitioned as if the level candidates were arms.
    const auto part = partition_blocks(train_split.rows(), levels.size(), opts.block_rule);
    std::vector<std::size_t> budget_ids;
    for (std::size_t b = 0; b < std::min<std::size_t>(2, part.block_count); ++b) {
      budget_ids.push_back(b);
    }
    const LRHyperParams filter_hyper{kFilterAlpha, kFilterL1, kFilterL2, opts.batch_size};

    const auto candidate_fields = make_base_fields(schema, all_levels);
    const EncodedDataset cand_train =
        encode_dataset(train_split, candidate_fields, all_levels, cfg);
    const EncodedDataset cand_valid =
        encode_dataset(valid_split, candidate_fields, all_levels, cfg);

    std::vector<GranularityScore> scores(candidate_fields.size());
    parallel_for(candidate_fields.size(), opts.workers, [&](std::size_t f) {
      if (candidate_fields[f].granularity == 0) return;  // categorical, not filtered
      SgdOptions so{filter_hyper.alpha, filter_hyper.l1, filter_hyper.l2, filter_hyper.batch_size,
                    /*train_bias=*/true};
      SgdTrainer trainer(cand_train, cfg, {CrossFeature::single(static_cast<BaseFieldId>(f))},
                         so);
      for (std::size_t id : budget_ids) trainer.run_block(part.blocks[id]);
      const double bias = trainer.bias();
      const FieldWeights w = std::move(trainer.take_weights().front());
      std::vector<double> s(cand_valid.rows());
      for (std::size_t r = 0; r < cand_valid.rows(); ++r) {
        s[r] = bias + w.get(cand_valid.buckets[f][r]);
      }
      scores[f] = {candidate_fields[f].granularity, auc(s, cand_valid.labels)};
    });

    for (auto& nf : kept.numeric_fields) {
      std::vector<GranularityScore> column_scores;
      for (std::size_t f = 0; f < candidate_fields.size(); ++f) {
        if (candidate_fields[f].source_field == nf.field_index &&
            candidate_fields[f].granularity != 0) {
          column_scores.push_back(scores[f]);
          result.filter_trace.push_back(scores[f]);
        }
      }
      nf.levels = filter_granularities(column_scores);
    }
  }

  result.disc = std::move(kept);
  result.base_fields = make_base_fields(schema, result.disc);
  result.train = encode_dataset(train_split, result.base_fields, result.disc, cfg);
  result.valid = encode_dataset(valid_split, result.base_fields, result.disc, cfg);
  return result;
}

}  // namespace crossfeat
