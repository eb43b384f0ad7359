#include "crossfeat/auc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "crossfeat/error.hpp"

namespace crossfeat {

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels,
           bool* degenerate) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw Error(Errc::bad_argument, "auc needs matching nonempty scores and labels");
  }
  if (degenerate) *degenerate = false;

  std::size_t positives = 0;
  for (auto y : labels) positives += y;
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    if (degenerate) *degenerate = true;
    return 0.5;
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tie groups; sum of positive ranks gives the U statistic.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based mean of [i+1, j]
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) pos_rank_sum += avg_rank;
    }
    i = j;
  }

  const double p = static_cast<double>(positives);
  const double u = pos_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double mean_logloss(std::span<const double> probabilities,
                    std::span<const std::uint8_t> labels) {
  if (probabilities.size() != labels.size() || probabilities.empty()) {
    throw Error(Errc::bad_argument, "logloss needs matching nonempty inputs");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    double p = std::clamp(probabilities[i], 1e-15, 1.0 - 1e-15);
    total += labels[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(probabilities.size());
}

}  // namespace crossfeat
