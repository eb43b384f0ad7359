#include "crossfeat/discretize.hpp"

#include <algorithm>

#include "crossfeat/error.hpp"

namespace crossfeat {

const FieldDiscretization* DiscretizationSpec::for_field(std::size_t field_index) const {
  for (const auto& f : numeric_fields) {
    if (f.field_index == field_index) return &f;
  }
  return nullptr;
}

NumericBinning binning_from_training(const std::vector<double>& values) {
  if (values.empty()) throw Error(Errc::degenerate_column, "empty numeric column");
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

std::vector<std::uint32_t> default_granularities(std::size_t train_rows) {
  if (train_rows > 5'000'000) return {10, 100, 1000, 10000};
  return {10, 100, 1000};
}

}  // namespace crossfeat
