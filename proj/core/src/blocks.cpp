#include "crossfeat/blocks.hpp"

#include <algorithm>
#include <bit>

#include "crossfeat/error.hpp"
#include "crossfeat/lr.hpp"
#include "crossfeat/parallel.hpp"

namespace crossfeat {

std::size_t halving_block_budget(std::size_t n_candidates) {
  if (n_candidates <= 1) return 1;
  const unsigned rounds = std::bit_width(n_candidates - 1);  // ceil(log2 n)
  return (std::size_t{1} << rounds) - 1;                     // sum 2^k, k < rounds
}

BlockPartition partition_blocks(std::size_t train_rows, std::size_t n_candidates,
                                const BlockRule& rule) {
  if (n_candidates < 1) throw Error(Errc::bad_argument, "n_candidates must be >= 1");
  if (train_rows == 0) throw Error(Errc::bad_argument, "cannot partition zero rows");

  const std::size_t budget = halving_block_budget(n_candidates);
  const std::size_t factor = train_rows < rule.small_data_threshold ? 2 : 5;
  std::size_t n = std::max<std::size_t>(1, factor * budget);

  BlockPartition part;
  if (n > train_rows) {
    part.warnings.push_back("block count " + std::to_string(n) + " reduced to row count " +
                            std::to_string(train_rows));
    n = train_rows;
  }
  part.block_count = n;
  part.blocks.reserve(n);
  // Equal sizes +-1: the first (rows % n) blocks get one extra row.
  const std::size_t base = train_rows / n;
  const std::size_t extra = train_rows % n;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    part.blocks.push_back({cursor, cursor + len});
    cursor += len;
  }
  return part;
}

void update_bsum(BsumCache& cache, const EncodedDataset& train, const EncodedDataset& valid,
                 const BlockPartition& partition, const LRModel& model,
                 const FeatureSet& solution, std::span<const std::size_t> block_ids,
                 const HashConfig& cfg, std::size_t workers) {
  std::vector<const FieldWeights*> member_weights;
  std::vector<std::uint64_t> member_digests;
  member_weights.reserve(solution.size());
  for (const auto& member : solution.members()) {
    const FieldWeights* w = model.weights_for(member);
    if (!w) throw Error(Errc::field_mismatch, "solution feature absent from the model");
    member_weights.push_back(w);
    member_digests.push_back(member.digest(cfg));
  }
  cache.train.resize(train.rows());
  cache.valid.resize(valid.rows());

  auto fill_rows = [&](const EncodedDataset& data, std::vector<double>& lane, std::size_t begin,
                       std::size_t end) {
    auto members = solution.members();
    for (std::size_t r = begin; r < end; ++r) {
      double z = model.bias;
      for (std::size_t i = 0; i < members.size(); ++i) {
        z += member_weights[i]->get(
            feature_bucket(data, r, members[i], cfg, member_digests[i]));
      }
      lane[r] = z;
    }
  };

  if (block_ids.empty()) {
    const std::size_t n = train.rows();
    const std::size_t chunks = workers > 1 ? workers * 4 : 1;
    const std::size_t step = std::max<std::size_t>(1, (n + chunks - 1) / chunks);
    parallel_for((n + step - 1) / step, workers, [&](std::size_t c) {
      fill_rows(train, cache.train, c * step, std::min(n, (c + 1) * step));
    });
  } else {
    parallel_for(block_ids.size(), workers, [&](std::size_t i) {
      const RowRange& b = partition.blocks.at(block_ids[i]);
      fill_rows(train, cache.train, b.begin, b.end);
    });
  }
  fill_rows(valid, cache.valid, 0, valid.rows());
  ++cache.stamp;
}

}  // namespace crossfeat
