#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "crossfeat/schema.hpp"

namespace crossfeat {

inline constexpr const char* kMissingToken = "__MISSING__";

// Missing markers: NaN for numeric cells, empty string for category tokens.
struct NumericColumn {
  std::vector<double> values;
};
struct CategoricalColumn {
  std::vector<std::string> tokens;
};
using Column = std::variant<NumericColumn, CategoricalColumn>;

inline bool is_missing_numeric(double v) { return v != v; }
inline double missing_numeric() { return std::numeric_limits<double>::quiet_NaN(); }

struct RawTable {
  FeatureSchema schema;
  std::vector<Column> columns;  // parallel to schema.fields
  std::vector<std::uint8_t> labels;

  std::size_t rows() const { return labels.size(); }
  RawTable select(const std::vector<std::size_t>& indices) const;
};

// Replayable missing-value policy: per-field either a training median or the
// dedicated missing token.
struct FillRule {
  double median = 0.0;        // numerical fields
  std::string token;          // categorical fields
  bool operator==(const FillRule&) const = default;
};
struct FillRules {
  std::vector<FillRule> per_field;  // parallel to schema.fields
  bool operator==(const FillRules&) const = default;
};

// Parses a headered CSV against `schema`. Numeric parse failures become
// missing; category tokens are kept verbatim; labels must be binary.
RawTable load_csv(const std::string& path, const FeatureSchema& schema);
RawTable table_from_cells(const std::vector<std::vector<std::string>>& cells,
                          const FeatureSchema& schema);

// Fills in place and returns the rules: numerical missing -> column median,
// categorical missing -> kMissingToken. Throws DegenerateColumn if a numeric
// column is entirely missing.
FillRules fill_missing(RawTable& table);
// Replays previously computed rules (validation split, inference).
void apply_fill(RawTable& table, const FillRules& rules);

// Median of the non-missing values; mean of the two central values for even
// counts. NaN entries ignored; throws DegenerateColumn if none remain.
double column_median(const std::vector<double>& values);

// Deterministic seeded shuffle; validation gets round(fraction * rows) rows.
struct TrainValidSplit {
  RawTable train;
  RawTable valid;
};
TrainValidSplit split_train_validation(const RawTable& table, double fraction,
                                       std::uint64_t seed);

}  // namespace crossfeat
