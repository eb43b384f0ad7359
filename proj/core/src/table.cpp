#include "crossfeat/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "crossfeat/csv.hpp"
#include "crossfeat/error.hpp"
#include "crossfeat/rng.hpp"

namespace crossfeat {

namespace {

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  const char* e2 = e;
  while (e2 > b && (e2[-1] == ' ' || e2[-1] == '\t')) --e2;
  if (b == e2) return false;
  auto [p, ec] = std::from_chars(b, e2, out);
  return ec == std::errc() && p == e2 && std::isfinite(out);
}

}  // namespace

RawTable table_from_cells(const std::vector<std::vector<std::string>>& cells,
                          const FeatureSchema& schema) {
  schema.validate();
  if (cells.empty()) throw Error(Errc::io, "empty CSV, header row required");
  const auto& header = cells.front();

  // Header must carry exactly the schema fields plus the label.
  std::vector<std::size_t> field_col(schema.fields.size(), SIZE_MAX);
  std::size_t label_col = SIZE_MAX;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.label) {
      if (label_col != SIZE_MAX) throw Error(Errc::schema_mismatch, "duplicate label column");
      label_col = c;
      continue;
    }
    auto idx = schema.field_index(header[c]);
    if (!idx) throw Error(Errc::schema_mismatch, "header column '" + header[c] + "' not in schema");
    if (field_col[*idx] != SIZE_MAX) {
      throw Error(Errc::schema_mismatch, "duplicate column '" + header[c] + "'");
    }
    field_col[*idx] = c;
  }
  if (label_col == SIZE_MAX) {
    throw Error(Errc::missing_label, "label column '" + schema.label + "' not in header");
  }
  for (std::size_t i = 0; i < schema.fields.size(); ++i) {
    if (field_col[i] == SIZE_MAX) {
      throw Error(Errc::schema_mismatch,
                  "schema field '" + schema.fields[i].name + "' not in header");
    }
  }

  RawTable table;
  table.schema = schema;
  const std::size_t nrows = cells.size() - 1;
  for (const auto& f : schema.fields) {
    if (f.kind == FieldKind::numerical) {
      NumericColumn col;
      col.values.reserve(nrows);
      table.columns.emplace_back(std::move(col));
    } else {
      CategoricalColumn col;
      col.tokens.reserve(nrows);
      table.columns.emplace_back(std::move(col));
    }
  }
  table.labels.reserve(nrows);

  for (std::size_t r = 1; r < cells.size(); ++r) {
    const auto& row = cells[r];
    if (row.size() != header.size()) {
      throw Error(Errc::schema_mismatch,
                  "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                      " cells, header has " + std::to_string(header.size()));
    }
    double lv;
    if (!parse_double(row[label_col], lv) || (lv != 0.0 && lv != 1.0)) {
      throw Error(Errc::non_binary_label,
                  "row " + std::to_string(r) + " label '" + row[label_col] + "'");
    }
    table.labels.push_back(static_cast<std::uint8_t>(lv));

    for (std::size_t i = 0; i < schema.fields.size(); ++i) {
      const std::string& cell = row[field_col[i]];
      if (schema.fields[i].kind == FieldKind::numerical) {
        double v;
        std::get<NumericColumn>(table.columns[i])
            .values.push_back(parse_double(cell, v) ? v : missing_numeric());
      } else {
        std::get<CategoricalColumn>(table.columns[i]).tokens.push_back(cell);
      }
    }
  }
  return table;
}

RawTable load_csv(const std::string& path, const FeatureSchema& schema) {
  return table_from_cells(read_csv_file(path), schema);
}

RawTable RawTable::select(const std::vector<std::size_t>& indices) const {
  RawTable out;
  out.schema = schema;
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels.at(i));
  for (const auto& col : columns) {
    if (const auto* nc = std::get_if<NumericColumn>(&col)) {
      NumericColumn c;
      c.values.reserve(indices.size());
      for (std::size_t i : indices) c.values.push_back(nc->values[i]);
      out.columns.emplace_back(std::move(c));
    } else {
      const auto& cc = std::get<CategoricalColumn>(col);
      CategoricalColumn c;
      c.tokens.reserve(indices.size());
      for (std::size_t i : indices) c.tokens.push_back(cc.tokens[i]);
      out.columns.emplace_back(std::move(c));
    }
  }
  return out;
}

double column_median(const std::vector<double>& values) {
  std::vector<double> present;
  present.reserve(values.size());
  for (double v : values) {
    if (!is_missing_numeric(v)) present.push_back(v);
  }
  if (present.empty()) throw Error(Errc::degenerate_column, "all values missing");
  std::sort(present.begin(), present.end());
  std::size_t n = present.size();
  if (n % 2 == 1) return present[n / 2];
  return (present[n / 2 - 1] + present[n / 2]) / 2.0;
}

FillRules fill_missing(RawTable& table) {
  FillRules rules;
  rules.per_field.resize(table.columns.size());
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (auto* nc = std::get_if<NumericColumn>(&table.columns[i])) {
      double med;
      try {
        med = column_median(nc->values);
      } catch (const Error&) {
        throw Error(Errc::degenerate_column,
                    "numeric column '" + table.schema.fields[i].name + "' is entirely missing");
      }
      rules.per_field[i].median = med;
      for (double& v : nc->values) {
        if (is_missing_numeric(v)) v = med;
      }
    } else {
      auto& cc = std::get<CategoricalColumn>(table.columns[i]);
      rules.per_field[i].token = kMissingToken;
      for (auto& t : cc.tokens) {
        if (t.empty()) t = kMissingToken;
      }
    }
  }
  return rules;
}

void apply_fill(RawTable& table, const FillRules& rules) {
  if (rules.per_field.size() != table.columns.size()) {
    throw Error(Errc::field_mismatch, "fill rules do not match schema");
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (auto* nc = std::get_if<NumericColumn>(&table.columns[i])) {
      for (double& v : nc->values) {
        if (is_missing_numeric(v)) v = rules.per_field[i].median;
      }
    } else {
      auto& cc = std::get<CategoricalColumn>(table.columns[i]);
      for (auto& t : cc.tokens) {
        if (t.empty()) t = rules.per_field[i].token;
      }
    }
  }
}

TrainValidSplit split_train_validation(const RawTable& table, double fraction,
                                       std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(Errc::bad_argument, "validation fraction must lie in (0,1)");
  }
  const std::size_t n = table.rows();
  if (n < 10) throw Error(Errc::bad_argument, "need at least 10 rows to split");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  fisher_yates_shuffle(order, derive_seed(seed, "split"));

  std::size_t n_valid = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  n_valid = std::min(std::max<std::size_t>(n_valid, 1), n - 1);

  std::vector<std::size_t> train_idx(order.begin(), order.end() - n_valid);
  std::vector<std::size_t> valid_idx(order.end() - n_valid, order.end());
  return {table.select(train_idx), table.select(valid_idx)};
}

}  // namespace crossfeat
