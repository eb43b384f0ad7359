#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crossfeat {

// Equal-width binning of one numeric column at one granularity. Range comes
// from the training split; out-of-range values clamp to the edge bins.
struct NumericBinning {
  double value_min = 0.0;
  double value_max = 0.0;

  std::uint32_t bin_of(double v, std::uint32_t granularity) const {
    if (!(value_max > value_min)) return 0;  // constant column
    double t = (v - value_min) * static_cast<double>(granularity) / (value_max - value_min);
    if (t <= 0.0) return 0;
    std::uint32_t b = static_cast<std::uint32_t>(t);
    return b >= granularity ? granularity - 1 : b;
  }

  bool operator==(const NumericBinning&) const = default;
};

// Per numeric schema field: training range plus the granularities kept by the
// best-half filter, strictly increasing.
struct FieldDiscretization {
  std::size_t field_index = 0;  // schema field index
  NumericBinning binning;
  std::vector<std::uint32_t> levels;

  bool operator==(const FieldDiscretization&) const = default;
};

struct DiscretizationSpec {
  std::vector<FieldDiscretization> numeric_fields;  // schema order

  const FieldDiscretization* for_field(std::size_t field_index) const;

  bool operator==(const DiscretizationSpec&) const = default;
};

NumericBinning binning_from_training(const std::vector<double>& values);

// Default granularity levels {10^p}. P escalates from 3 to 4 on very large
// training sets.
std::vector<std::uint32_t> default_granularities(std::size_t train_rows);

}  // namespace crossfeat
