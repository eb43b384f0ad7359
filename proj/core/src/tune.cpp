#include "crossfeat/tune.hpp"

#include <cmath>

#include "crossfeat/error.hpp"
#include "crossfeat/parallel.hpp"

namespace crossfeat {

namespace {
constexpr std::size_t kGridPoints = 6;
constexpr double kAlphaLo = 0.005, kAlphaHi = 1.0;
constexpr double kPenaltyLo = 1e-4, kPenaltyHi = 10.0;
}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw Error(Errc::bad_argument, "log_grid needs 0 < lo < hi and >= 2 points");
  }
  std::vector<double> out(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = lo * std::exp(step * static_cast<double>(i));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

TuneResult tune_hyperparams(const EncodedDataset& train, const BlockPartition& partition,
                            const EncodedDataset& valid, const FeatureSet& originals,
                            const HashConfig& cfg, std::size_t batch_size,
                            std::size_t workers) {
  const auto alphas = log_grid(kAlphaLo, kAlphaHi, kGridPoints);
  const auto penalties = log_grid(kPenaltyLo, kPenaltyHi, kGridPoints);

  struct Point {
    LRHyperParams hyper;
    double auc = -1.0;
  };
  std::vector<Point> grid;
  grid.reserve(alphas.size() * penalties.size() * penalties.size());
  for (double a : alphas) {
    for (double l1 : penalties) {
      for (double l2 : penalties) {
        grid.push_back({{a, l1, l2, batch_size}, -1.0});
      }
    }
  }

  parallel_for(grid.size(), workers, [&](std::size_t i) {
    auto [model, metric] = train_full(train, partition, valid, originals, cfg, grid[i].hyper);
    grid[i].auc = metric.auc;
  });

  TuneResult result;
  result.evaluated = grid.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i].auc > grid[best].auc) best = i;  // ties keep the earliest grid point
  }
  result.best = grid[best].hyper;
  result.best_auc = grid[best].auc;
  return result;
}

}  // namespace crossfeat
