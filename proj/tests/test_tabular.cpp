#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "crossfeat/blocks.hpp"
#include "crossfeat/csv.hpp"
#include "crossfeat/error.hpp"
#include "crossfeat/lr.hpp"
#include "crossfeat/table.hpp"
#include "support/synthetic.hpp"

using namespace crossfeat;

namespace {

FeatureSchema age_job_schema() {
  FeatureSchema s;
  s.fields = {{"age", FieldKind::numerical}, {"job", FieldKind::categorical}};
  s.label = "y";
  return s;
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("csv parses rfc4180 quoting") {
  auto rows = parse_csv("a,b\n\"x,1\",\"he said \"\"hi\"\"\"\n\"multi\nline\",plain\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "x,1");
  CHECK(rows[1][1] == "he said \"hi\"");
  CHECK(rows[2][0] == "multi\nline");
  CHECK(rows[2][1] == "plain");
}

TEST_CASE("csv handles crlf and missing trailing newline") {
  auto rows = parse_csv("a,b\r\n1,2\r\n3,4");
  REQUIRE(rows.size() == 3);
  CHECK(rows[2][1] == "4");
}

TEST_CASE("load_csv basic parse") {
  auto path = write_temp("cf_basic.csv", "age,job,y\n37,teacher,1\n52,nurse,0\n");
  RawTable t = load_csv(path, age_job_schema());
  CHECK(t.rows() == 2);
  CHECK(t.columns.size() == 2);
  CHECK(std::get<NumericColumn>(t.columns[0]).values[0] == 37.0);
  CHECK(std::get<CategoricalColumn>(t.columns[1]).tokens[1] == "nurse");
  CHECK(t.labels == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("load_csv maps empty and unparseable numeric cells to missing") {
  auto path = write_temp("cf_missing.csv", "age,job,y\n,teacher,1\nforty,nurse,0\n");
  RawTable t = load_csv(path, age_job_schema());
  CHECK(is_missing_numeric(std::get<NumericColumn>(t.columns[0]).values[0]));
  CHECK(is_missing_numeric(std::get<NumericColumn>(t.columns[0]).values[1]));
}

TEST_CASE("load_csv rejects non-binary labels") {
  auto path = write_temp("cf_lbl.csv", "age,job,y\n37,teacher,2\n");
  CHECK_THROWS_WITH_AS(load_csv(path, age_job_schema()), doctest::Contains("NonBinaryLabel"),
                       Error);
}

TEST_CASE("load_csv rejects header mismatch and missing label") {
  auto p1 = write_temp("cf_h1.csv", "age,occupation,y\n37,teacher,1\n");
  CHECK_THROWS_AS(load_csv(p1, age_job_schema()), Error);
  auto p2 = write_temp("cf_h2.csv", "age,job\n37,teacher\n");
  try {
    load_csv(p2, age_job_schema());
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_label);
  }
}

TEST_CASE("fill_missing uses the column median") {
  RawTable t;
  t.schema = age_job_schema();
  t.columns = {NumericColumn{{1.0, missing_numeric(), 3.0}},
               CategoricalColumn{{"a", "", "b"}}};
  t.labels = {0, 1, 0};

  // Independent median oracle: sort the present values by hand.
  std::vector<double> present = {1.0, 3.0};
  std::sort(present.begin(), present.end());
  const double oracle = (present[0] + present[1]) / 2.0;
  CHECK(oracle == 2.0);

  FillRules rules = fill_missing(t);
  CHECK(std::get<NumericColumn>(t.columns[0]).values == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(rules.per_field[0].median == oracle);
  CHECK(std::get<CategoricalColumn>(t.columns[1]).tokens[1] == kMissingToken);
  CHECK(rules.per_field[1].token == kMissingToken);
}

TEST_CASE("fill_missing without gaps still records rules") {
  RawTable t;
  t.schema = age_job_schema();
  t.columns = {NumericColumn{{1.0, 2.0}}, CategoricalColumn{{"a", "b"}}};
  t.labels = {0, 1};
  RawTable before = t;
  FillRules rules = fill_missing(t);
  CHECK(std::get<NumericColumn>(t.columns[0]).values ==
        std::get<NumericColumn>(before.columns[0]).values);
  CHECK(rules.per_field[0].median == 1.5);
}

TEST_CASE("fill_missing is idempotent") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    SplitMix64 rng(seed);
    RawTable t;
    t.schema = age_job_schema();
    NumericColumn nc;
    CategoricalColumn cc;
    for (int i = 0; i < 101; ++i) {
      nc.values.push_back(rng.next_unit() < 0.3 ? missing_numeric()
                                                : std::floor(rng.next_unit() * 50.0));
      cc.tokens.push_back(rng.next_unit() < 0.2 ? "" : "tok" + std::to_string(rng.next_below(7)));
      t.labels.push_back(rng.next() & 1);
    }
    t.columns = {std::move(nc), std::move(cc)};

    FillRules r1 = fill_missing(t);
    RawTable once = t;
    FillRules r2 = fill_missing(t);
    CHECK(r1 == r2);
    CHECK(std::get<NumericColumn>(t.columns[0]).values ==
          std::get<NumericColumn>(once.columns[0]).values);
    CHECK(std::get<CategoricalColumn>(t.columns[1]).tokens ==
          std::get<CategoricalColumn>(once.columns[1]).tokens);
  }
}

TEST_CASE("fill_missing rejects an all-missing numeric column") {
  RawTable t;
  t.schema = age_job_schema();
  t.columns = {NumericColumn{{missing_numeric(), missing_numeric()}},
               CategoricalColumn{{"a", "b"}}};
  t.labels = {0, 1};
  try {
    fill_missing(t);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_column);
  }
}

TEST_CASE("split sizes and determinism") {
  RawTable t = testing::random_cat_table(9, 100, 2, 4);
  auto s1 = split_train_validation(t, 0.2, 123);
  CHECK(s1.train.rows() == 80);
  CHECK(s1.valid.rows() == 20);

  auto s2 = split_train_validation(t, 0.2, 123);
  CHECK(std::get<CategoricalColumn>(s1.train.columns[0]).tokens ==
        std::get<CategoricalColumn>(s2.train.columns[0]).tokens);
  CHECK(s1.valid.labels == s2.valid.labels);

  auto s3 = split_train_validation(t, 0.2, 124);
  CHECK(std::get<CategoricalColumn>(s1.train.columns[0]).tokens !=
        std::get<CategoricalColumn>(s3.train.columns[0]).tokens);

  CHECK_THROWS_AS(split_train_validation(t, 0.0, 1), Error);
  CHECK_THROWS_AS(split_train_validation(t, 1.0, 1), Error);
}

TEST_CASE("split covers the table disjointly") {
  RawTable t = testing::random_cat_table(10, 57, 1, 9);
  auto s = split_train_validation(t, 0.25, 7);
  CHECK(s.train.rows() + s.valid.rows() == 57);
  // Token multiset is preserved.
  std::vector<std::string> all = std::get<CategoricalColumn>(t.columns[0]).tokens;
  std::vector<std::string> merged = std::get<CategoricalColumn>(s.train.columns[0]).tokens;
  const auto& v = std::get<CategoricalColumn>(s.valid.columns[0]).tokens;
  merged.insert(merged.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  std::sort(merged.begin(), merged.end());
  CHECK(all == merged);
}

TEST_CASE("partition_blocks follows the successive-halving budget rule") {
  // 8 candidates: budget 1+2+4 = 7; small data doubles it.
  auto p = partition_blocks(1000, 8);
  CHECK(halving_block_budget(8) == 7);
  CHECK(p.block_count == 14);

  // Single candidate: degenerate budget forces one block.
  auto p1 = partition_blocks(1000, 1);
  CHECK(p1.block_count == 1);
  CHECK(p1.blocks[0].size() == 1000);

  // Large data: 5x budget, so full halving depth touches 7/35 = 20% of rows.
  BlockRule large{/*small_data_threshold=*/500};
  auto p5 = partition_blocks(1000, 8, large);
  CHECK(p5.block_count == 35);
}

TEST_CASE("partition_blocks clamps to the row count with a warning") {
  auto p = partition_blocks(5, 8);
  CHECK(p.block_count == 5);
  REQUIRE(p.warnings.size() == 1);
  CHECK(p.warnings[0].find("reduced") != std::string::npos);
}

TEST_CASE("partition blocks are disjoint, covering, equal within one row") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 1 + rng.next_below(5000);
    const std::size_t n = 1 + rng.next_below(40);
    auto p = partition_blocks(rows, n);

    CHECK(p.block_count >= std::min(halving_block_budget(n), rows));
    std::size_t covered = 0, lo = SIZE_MAX, hi = 0;
    for (const auto& b : p.blocks) {
      CHECK(b.begin < b.end);
      covered += b.size();
      lo = std::min(lo, b.size());
      hi = std::max(hi, b.size());
    }
    CHECK(covered == rows);
    CHECK(hi - lo <= 1);
    for (std::size_t i = 1; i < p.blocks.size(); ++i) {
      CHECK(p.blocks[i].begin == p.blocks[i - 1].end);
    }
  }
}

TEST_CASE("update_bsum matches a direct dot-product oracle") {
  RawTable t = testing::random_cat_table(42, 400, 4, 6);
  auto split = split_train_validation(t, 0.2, 42);
  fill_missing(split.train);
  fill_missing(split.valid);

  HashConfig cfg{1u << 12, 99};
  DiscretizationSpec disc;
  auto base = make_base_fields(split.train.schema, disc);
  auto train = encode_dataset(split.train, base, disc, cfg);
  auto valid = encode_dataset(split.valid, base, disc, cfg);

  FeatureSet set = FeatureSet::originals(base.size());
  set.add(CrossFeature({0, 2}));

  LRHyperParams hyper{0.3, 0.0, 0.0, 64};
  auto part = partition_blocks(train.rows(), 4);
  auto [model, metric] = train_full(train, part, valid, set, cfg, hyper);

  BsumCache cache;
  update_bsum(cache, train, valid, part, model, set, {}, cfg);

  for (std::size_t r = 0; r < train.rows(); r += 17) {
    double expect = model.bias;
    for (std::size_t i = 0; i < model.features.size(); ++i) {
      expect += model.weights[i].get(
          feature_bucket(train, r, model.features[i], cfg, model.digests[i]));
    }
    CHECK(std::abs(cache.train[r] - expect) <= 1e-9);
  }
  for (std::size_t r = 0; r < valid.rows(); ++r) {
    CHECK(std::abs(cache.valid[r] - (model.bias +
                                     [&] {
                                       double s = 0;
                                       for (std::size_t i = 0; i < model.features.size(); ++i)
                                         s += model.weights[i].get(feature_bucket(
                                             valid, r, model.features[i], cfg,
                                             model.digests[i]));
                                       return s;
                                     }())) <= 1e-9);
  }
}

TEST_CASE("update_bsum simple cases and idempotence") {
  RawTable t = testing::random_cat_table(5, 60, 1, 3);
  fill_missing(t);
  HashConfig cfg{1u << 10, 7};
  DiscretizationSpec disc;
  auto base = make_base_fields(t.schema, disc);
  auto data = encode_dataset(t, base, disc, cfg);
  FeatureSet set = FeatureSet::originals(1);
  auto part = partition_blocks(data.rows(), 1);

  LRModel zero = make_zero_model(set, cfg, {});
  BsumCache cache;
  update_bsum(cache, data, data, part, zero, set, {}, cfg);
  for (double v : cache.train) CHECK(v == 0.0);

  LRModel m = make_zero_model(set, cfg, {});
  m.bias = 0.1;
  m.weights[0].set(data.buckets[0][0], 0.7);
  update_bsum(cache, data, data, part, m, set, {}, cfg);
  CHECK(cache.train[0] == doctest::Approx(0.8).epsilon(1e-12));

  auto snapshot = cache.train;
  update_bsum(cache, data, data, part, m, set, {}, cfg);
  CHECK(cache.train == snapshot);
}

TEST_CASE("update_bsum rejects a solution feature missing from the model") {
  RawTable t = testing::random_cat_table(6, 30, 2, 3);
  fill_missing(t);
  HashConfig cfg{1u << 10, 7};
  DiscretizationSpec disc;
  auto base = make_base_fields(t.schema, disc);
  auto data = encode_dataset(t, base, disc, cfg);
  auto part = partition_blocks(data.rows(), 1);

  FeatureSet small = FeatureSet::originals(2);
  LRModel m = make_zero_model(small, cfg, {});
  FeatureSet bigger = small;
  bigger.add(CrossFeature({0, 1}));
  BsumCache cache;
  try {
    update_bsum(cache, data, data, part, m, bigger, {}, cfg);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::field_mismatch);
  }
}
