#pragma once

#include <cstdint>
#include <span>

namespace crossfeat {

// Mann-Whitney rank AUC; tied scores contribute 1/2. Single-class input sets
// *degenerate (when given) and returns 0.5.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels,
           bool* degenerate = nullptr);

// Mean binary cross-entropy with probabilities clamped to [1e-15, 1-1e-15].
double mean_logloss(std::span<const double> probabilities, std::span<const std::uint8_t> labels);

}  // namespace crossfeat
