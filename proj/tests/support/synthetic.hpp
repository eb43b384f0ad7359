#pragma once

// Synthetic data builders shared by unit and acceptance tests. The planted
// generator carries an exact certificate (population AUCs computed from the
// true cell probabilities), so tests assert against ground truth rather than
// fitted estimates.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "crossfeat/rng.hpp"
#include "crossfeat/table.hpp"

namespace crossfeat::testing {

inline FeatureSchema cat_schema(std::size_t fields, const std::string& label = "y") {
  FeatureSchema s;
  for (std::size_t i = 0; i < fields; ++i) {
    s.fields.push_back({"f" + std::to_string(i), FieldKind::categorical});
  }
  s.label = label;
  return s;
}

// Categorical-only table with uniform random tokens per field.
inline RawTable random_cat_table(std::uint64_t seed, std::size_t rows, std::size_t fields,
                                 std::size_t vocab, double label_rate = 0.5) {
  RawTable t;
  t.schema = cat_schema(fields);
  SplitMix64 rng(seed);
  for (std::size_t f = 0; f < fields; ++f) {
    CategoricalColumn col;
    col.tokens.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      col.tokens.push_back("v" + std::to_string(rng.next_below(vocab)));
    }
    t.columns.emplace_back(std::move(col));
  }
  t.labels.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    t.labels.push_back(rng.next_unit() < label_rate ? 1 : 0);
  }
  return t;
}

// Exact AUC of a scorer over a discrete cell distribution: cells have mass[i]
// and positive-class probability p[i]; the scorer ranks by score[i].
inline double population_auc(const std::vector<double>& mass, const std::vector<double>& p,
                             const std::vector<double>& score) {
  double pos_total = 0.0, neg_total = 0.0;
  const std::size_t n = mass.size();
  for (std::size_t i = 0; i < n; ++i) {
    pos_total += mass[i] * p[i];
    neg_total += mass[i] * (1.0 - p[i]);
  }
  double wins = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double pair = mass[i] * p[i] * mass[j] * (1.0 - p[j]);
      if (score[i] > score[j]) wins += pair;
      else if (score[i] == score[j]) wins += 0.5 * pair;
    }
  }
  return wins / (pos_total * neg_total);
}

// Label is a noisy deterministic function of the cross of three fields.
struct PlantedCrossData {
  RawTable table;
  std::array<std::size_t, 3> planted_fields;  // schema field indexes
  double max_single_auc = 0.0;                // population, over all fields
  double best_planted_pair_auc = 0.0;         // population, over AB/AC/BC
  double cross_auc = 0.0;                     // population AUC of the true cell scorer
  std::size_t resamples = 0;
};

// `fields` categorical columns (vocab tokens each); the first three drive the
// label through a random boolean cell function g with flip probability
// `noise`. g is resampled until every single-field population AUC is <= 0.58
// and some planted pair's population AUC is >= 0.66, so greedy pair-first
// search has a discoverable path while no single field suffices.
inline PlantedCrossData planted_cross_dataset(std::uint64_t seed, std::size_t rows,
                                              std::size_t fields = 8, std::size_t vocab = 8,
                                              double noise = 0.03) {
  PlantedCrossData out;
  out.planted_fields = {0, 1, 2};
  SplitMix64 rng(derive_seed(seed, "planted"));

  const std::size_t cells = vocab * vocab * vocab;
  std::vector<std::uint8_t> g(cells);

  auto cell_index = [&](std::size_t a, std::size_t b, std::size_t c) {
    return (a * vocab + b) * vocab + c;
  };

  for (std::size_t attempt = 0;; ++attempt) {
    for (auto& v : g) v = rng.next() & 1u;

    // Population single-field and pair AUCs from the true cell probabilities.
    std::vector<double> cell_p(cells);
    for (std::size_t i = 0; i < cells; ++i) cell_p[i] = g[i] ? 1.0 - noise : noise;

    auto project = [&](auto&& key_of, std::size_t buckets) {
      std::vector<double> mass(buckets, 0.0), psum(buckets, 0.0);
      for (std::size_t a = 0; a < vocab; ++a) {
        for (std::size_t b = 0; b < vocab; ++b) {
          for (std::size_t c = 0; c < vocab; ++c) {
            const std::size_t k = key_of(a, b, c);
            mass[k] += 1.0;
            psum[k] += cell_p[cell_index(a, b, c)];
          }
        }
      }
      std::vector<double> p(buckets), score(buckets);
      for (std::size_t k = 0; k < buckets; ++k) {
        p[k] = psum[k] / mass[k];
        score[k] = p[k];
        mass[k] /= static_cast<double>(cells);
      }
      return population_auc(mass, p, score);
    };

    const double auc_a = project([&](auto a, auto, auto) { return a; }, vocab);
    const double auc_b = project([&](auto, auto b, auto) { return b; }, vocab);
    const double auc_c = project([&](auto, auto, auto c) { return c; }, vocab);
    const double auc_ab = project([&](auto a, auto b, auto) { return a * vocab + b; },
                                  vocab * vocab);
    const double auc_ac = project([&](auto a, auto, auto c) { return a * vocab + c; },
                                  vocab * vocab);
    const double auc_bc = project([&](auto, auto b, auto c) { return b * vocab + c; },
                                  vocab * vocab);

    out.max_single_auc = std::max({auc_a, auc_b, auc_c});
    out.best_planted_pair_auc = std::max({auc_ab, auc_ac, auc_bc});
    if (out.max_single_auc <= 0.58 && out.best_planted_pair_auc >= 0.66) break;
    ++out.resamples;
  }

  {
    std::vector<double> mass(cells, 1.0 / static_cast<double>(cells));
    std::vector<double> p(cells), score(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      p[i] = g[i] ? 1.0 - noise : noise;
      score[i] = p[i];
    }
    out.cross_auc = population_auc(mass, p, score);
  }

  RawTable& t = out.table;
  t.schema = cat_schema(fields);
  std::vector<CategoricalColumn> cols(fields);
  t.labels.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t a = rng.next_below(vocab);
    const std::size_t b = rng.next_below(vocab);
    const std::size_t c = rng.next_below(vocab);
    cols[0].tokens.push_back("v" + std::to_string(a));
    cols[1].tokens.push_back("v" + std::to_string(b));
    cols[2].tokens.push_back("v" + std::to_string(c));
    for (std::size_t f = 3; f < fields; ++f) {
      cols[f].tokens.push_back("v" + std::to_string(rng.next_below(vocab)));
    }
    const double p = g[cell_index(a, b, c)] ? 1.0 - noise : noise;
    t.labels.push_back(rng.next_unit() < p ? 1 : 0);
  }
  for (auto& c : cols) t.columns.emplace_back(std::move(c));
  return out;
}

// Two-token single field, perfectly separable labels.
inline RawTable separable_table(std::size_t rows_per_class) {
  RawTable t;
  t.schema = cat_schema(1);
  CategoricalColumn col;
  for (std::size_t i = 0; i < rows_per_class; ++i) {
    col.tokens.push_back("pos");
    t.labels.push_back(1);
    col.tokens.push_back("neg");
    t.labels.push_back(0);
  }
  t.columns.emplace_back(std::move(col));
  return t;
}

}  // namespace crossfeat::testing
