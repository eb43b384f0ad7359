#include "crossfeat/search.hpp"

#include <algorithm>
#include <numeric>

#include "crossfeat/error.hpp"
#include "crossfeat/parallel.hpp"

namespace crossfeat {

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::max_features: return "max_features";
    case StopReason::performance: return "performance";
    case StopReason::max_runtime: return "max_runtime";
    case StopReason::empty_children: return "empty_children";
    case StopReason::interrupted: return "interrupted";
  }
  return "?";
}

namespace {

bool arm_rank_less(const CandidateArm& a, const CandidateArm& b) {
  if (a.current_auc != b.current_auc) return a.current_auc > b.current_auc;
  return feature_order_less(a.cross, b.cross);
}

}  // namespace

std::optional<CandidateArm> smbgd(std::vector<CandidateArm> arms, const SearchData& data,
                                  const BlockPartition& partition, const BsumCache& bsum,
                                  const LRHyperParams& hyper, SmbgdStats* stats,
                                  const std::atomic<bool>* stop) {
  if (arms.empty()) throw Error(Errc::bad_argument, "smbgd needs at least one arm");
  const std::uint64_t stamp = bsum.stamp;

  const std::size_t n = arms.size();
  std::size_t rounds = 1;
  while ((std::size_t{1} << rounds) < n) ++rounds;  // ceil(log2 n), min 1

  std::size_t cursor = 0;  // fresh-block cursor; never reuses a block in this call
  for (std::size_t k = 0; k < rounds; ++k) {
    if (stop && stop->load(std::memory_order_relaxed)) return std::nullopt;

    const std::size_t want = std::size_t{1} << k;
    std::vector<std::size_t> block_ids;
    for (std::size_t i = 0; i < want && cursor < partition.block_count; ++i) {
      block_ids.push_back(cursor++);
    }
    if (stats) {
      stats->round_blocks.push_back(block_ids);
      stats->round_survivor_counts.push_back(arms.size());
      stats->arm_block_pulls += arms.size() * block_ids.size();
    }

    parallel_for(arms.size(), data.workers, [&](std::size_t i) {
      CandidateArm& arm = arms[i];
      if (!block_ids.empty()) {
        FieldWeights warm = std::move(arm.weights);
        const FieldWeights* warm_ptr = warm.bucket_count() ? &warm : nullptr;
        arm.weights = train_field_wise(*data.train, partition, arm.cross, block_ids, bsum,
                                       stamp, warm_ptr, *data.hash, hyper);
        arm.blocks_consumed += block_ids.size();
      }
      arm.current_auc =
          fieldwise_validation_auc(*data.valid, arm.cross, arm.weights, bsum, *data.hash);
    });

    if (arms.size() == 1) break;
    std::stable_sort(arms.begin(), arms.end(), arm_rank_less);
    const std::size_t keep = std::max<std::size_t>(1, arms.size() / 2);  // rounding down
    arms.resize(keep);
    if (arms.size() == 1) break;
  }

  std::stable_sort(arms.begin(), arms.end(), arm_rank_less);
  return std::move(arms.front());
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void emit_progress(std::ostream* out, const HistoryEntry& h) {
  if (!out) return;
  // Line-delimited JSON, one record per adopted iteration.
  (*out) << "{\"iteration\":" << h.iteration << ",\"elapsed_seconds\":" << h.elapsed_seconds
         << ",\"candidates\":" << h.candidates << ",\"winner\":\"" << json_escape(h.winner)
         << "\",\"validation_auc\":" << h.validation_auc << "}\n";
  out->flush();
}

}  // namespace

SearchState beam_search(const SearchData& data, std::span<const std::string> base_names,
                        const TerminationConfig& term, const LRHyperParams& hyper,
                        std::ostream* progress, const std::atomic<bool>* stop) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto out_of_time = [&] {
    return term.max_runtime_seconds && elapsed() >= *term.max_runtime_seconds;
  };

  SearchState st;
  st.solution = FeatureSet::originals(data.train->field_count());

  // Base model on the original fields; one canonical whole-split partition.
  const BlockPartition full_part =
      partition_blocks(data.train->rows(), 1, data.block_rule);
  auto [base_model, base_metric] =
      train_full(*data.train, full_part, *data.valid, st.solution, *data.hash, hyper);
  st.model = std::move(base_model);
  st.validation_auc = base_metric.auc;
  st.base_auc = base_metric.auc;

  BsumCache bsum;
  update_bsum(bsum, *data.train, *data.valid, full_part, st.model, st.solution, {}, *data.hash,
              data.workers);

  std::size_t adopted = 0;
  for (;;) {
    if (stop && stop->load(std::memory_order_relaxed)) {
      st.stop_reason = StopReason::interrupted;
      break;
    }
    if (term.max_cross_features && adopted >= *term.max_cross_features) {
      st.stop_reason = StopReason::max_features;
      break;
    }
    if (out_of_time()) {
      st.stop_reason = StopReason::max_runtime;
      break;
    }

    const std::vector<CrossFeature> cands = candidate_crosses(st.solution);
    if (cands.empty()) {
      st.stop_reason = StopReason::empty_children;
      break;
    }

    // Fresh blocks within one SMBGD call; the partition is resized to this
    // iteration's candidate count, and only the blocks it may consume (plus
    // validation) get their bsum lanes refreshed.
    const BlockPartition part =
        partition_blocks(data.train->rows(), cands.size(), data.block_rule);
    const std::size_t scheduled =
        std::min(halving_block_budget(cands.size()), part.block_count);
    std::vector<std::size_t> scheduled_ids(scheduled);
    std::iota(scheduled_ids.begin(), scheduled_ids.end(), 0);
    update_bsum(bsum, *data.train, *data.valid, part, st.model, st.solution, scheduled_ids,
                *data.hash, data.workers);

    std::vector<CandidateArm> arms;
    arms.reserve(cands.size());
    for (const auto& c : cands) arms.push_back({c, FieldWeights{}, 0, 0.5});

    st.smbgd_trace.emplace_back();
    auto winner = smbgd(std::move(arms), data, part, bsum, hyper, &st.smbgd_trace.back(), stop);
    if (!winner) {
      st.stop_reason = StopReason::interrupted;
      break;
    }
    if (out_of_time()) {
      st.stop_reason = StopReason::max_runtime;
      break;
    }

    FeatureSet candidate_set = st.solution;
    candidate_set.add(winner->cross);
    auto [new_model, new_metric] =
        train_full(*data.train, full_part, *data.valid, candidate_set, *data.hash, hyper);

    if (term.performance_guard && new_metric.auc < st.validation_auc) {
      // Degradation both terminates (the paper's performance condition) and
      // reverts the adoption, so the emitted solution is the best seen.
      st.stop_reason = StopReason::performance;
      break;
    }

    st.solution = std::move(candidate_set);
    st.model = std::move(new_model);
    st.validation_auc = new_metric.auc;
    ++adopted;
    ++st.iteration;

    HistoryEntry h{st.iteration, elapsed(), cands.size(),
                   cross_name(winner->cross, base_names), st.validation_auc};
    st.history.push_back(h);
    emit_progress(progress, h);
    // bsum lanes refresh at the top of the next iteration, once its block
    // schedule is known.
  }

  st.elapsed_seconds = elapsed();
  return st;
}

}  // namespace crossfeat
