#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "crossfeat/dataset.hpp"
#include "crossfeat/discretize.hpp"
#include "crossfeat/features.hpp"
#include "crossfeat/hashing.hpp"
#include "crossfeat/preprocess.hpp"
#include "crossfeat/rng.hpp"

using namespace crossfeat;

TEST_CASE("equal-width bins") {
  NumericBinning b{0.0, 10.0};
  CHECK(b.bin_of(3.7, 10) == 3);
  CHECK(b.bin_of(10.0, 10) == 9);   // max clamps into the last bin
  CHECK(b.bin_of(0.0, 10) == 0);
  CHECK(b.bin_of(-5.0, 10) == 0);   // out-of-range clamps to edge bins
  CHECK(b.bin_of(99.0, 10) == 9);

  NumericBinning constant{4.0, 4.0};
  CHECK(constant.bin_of(4.0, 100) == 0);
  CHECK(constant.bin_of(-1.0, 100) == 0);
}

TEST_CASE("default granularities are powers of ten") {
  CHECK(default_granularities(10'000) == std::vector<std::uint32_t>{10, 100, 1000});
  CHECK(default_granularities(6'000'000) == std::vector<std::uint32_t>{10, 100, 1000, 10000});
}

TEST_CASE("bins partition the training range") {
  SplitMix64 rng(3);
  NumericBinning b{-3.5, 12.25};
  for (std::uint32_t g : {10u, 100u, 1000u}) {
    const double width = (b.value_max - b.value_min) / g;
    for (int i = 0; i < 2000; ++i) {
      const double v = b.value_min + rng.next_unit() * (b.value_max - b.value_min);
      const std::uint32_t bin = b.bin_of(v, g);
      // Linear-search oracle over the bin boundaries.
      std::uint32_t oracle = g - 1;
      for (std::uint32_t k = 0; k < g; ++k) {
        if (v < b.value_min + width * static_cast<double>(k + 1)) {
          oracle = k;
          break;
        }
      }
      // The formula and the scan may disagree only by one ULP at a boundary.
      CHECK(static_cast<int>(bin) - static_cast<int>(oracle) <= 1);
      CHECK(static_cast<int>(oracle) - static_cast<int>(bin) <= 1);
      CHECK(bin < g);
    }
  }
}

TEST_CASE("filter keeps the best half, coarser on ties") {
  // Rank-and-keep oracle: 0.64 and 0.61 survive out of three.
  std::vector<GranularityScore> scored = {{10, 0.61}, {100, 0.64}, {1000, 0.59}};
  CHECK(filter_granularities(scored) == std::vector<std::uint32_t>{10, 100});

  CHECK(filter_granularities({{1000, 0.5}}) == std::vector<std::uint32_t>{1000});

  std::vector<GranularityScore> tied = {{10, 0.6}, {100, 0.6}, {1000, 0.6}};
  CHECK(filter_granularities(tied) == std::vector<std::uint32_t>{10, 100});
}

TEST_CASE("hash_base determinism, range, and seed sensitivity") {
  HashConfig cfg{1u << 12, 42};
  CHECK(hash_base_token(cfg, 3, "teacher") == hash_base_token(cfg, 3, "teacher"));
  for (int i = 0; i < 500; ++i) {
    CHECK(hash_base_token(cfg, 1, "tok" + std::to_string(i)) < cfg.bucket_count);
  }
  HashConfig other{1u << 12, 43};
  bool any_differ = false;
  for (int i = 0; i < 64 && !any_differ; ++i) {
    any_differ = hash_base_token(cfg, 0, "t" + std::to_string(i)) !=
                 hash_base_token(other, 0, "t" + std::to_string(i));
  }
  CHECK(any_differ);
  CHECK_THROWS(HashConfig{1000, 0}.validate());  // not a power of two
}

TEST_CASE("hash_cross is canonical in the constituent set") {
  HashConfig cfg{1u << 12, 7};
  CrossFeature ab({0, 1});
  CrossFeature ba({1, 0});
  CHECK(ab == ba);
  std::vector<std::uint32_t> buckets = {17, 923};
  CHECK(hash_cross_buckets(cfg, ab.digest(cfg), buckets) ==
        hash_cross_buckets(cfg, ba.digest(cfg), buckets));

  CrossFeature abcd({3, 0, 2, 1});
  CHECK(abcd.order() == 4);
  std::vector<std::uint32_t> b4 = {5, 6, 7, 8};
  CHECK(hash_cross_buckets(cfg, abcd.digest(cfg), b4) < cfg.bucket_count);
}

TEST_CASE("cross digests are permutation invariant") {
  HashConfig cfg{1u << 12, 11};
  SplitMix64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BaseFieldId> ids;
    const std::size_t order = 2 + rng.next_below(5);
    for (std::size_t i = 0; i < order; ++i) {
      ids.push_back(static_cast<BaseFieldId>(rng.next_below(30)));
    }
    CrossFeature canonical(ids);
    fisher_yates_shuffle(ids, rng.next());
    CrossFeature shuffled(ids);
    CHECK(canonical == shuffled);
    CHECK(canonical.digest(cfg) == shuffled.digest(cfg));
  }
}

TEST_CASE("expand_children of four originals") {
  FeatureSet root = FeatureSet::originals(4);
  auto children = expand_children(root);
  CHECK(children.size() == 6);  // C(4,2) pairings: AB AC AD BC BD CD
  for (const auto& child : children) {
    CHECK(child.size() == 5);
    std::size_t crosses = 0;
    for (const auto& m : child.members()) crosses += m.order() == 2;
    CHECK(crosses == 1);
  }
}

TEST_CASE("expand_children drops unions already present") {
  // {A, B, AB}: hand enumeration of pairs ->
  //   (A,B) -> AB already a member; (A,AB) -> AB; (B,AB) -> AB. No children.
  FeatureSet node = FeatureSet::originals(2);
  node.add(CrossFeature({0, 1}));
  CHECK(candidate_crosses(node).empty());
  CHECK(expand_children(node).empty());
}

TEST_CASE("pairing two crosses reaches order four") {
  FeatureSet node = FeatureSet::originals(4);
  node.add(CrossFeature({0, 1}));  // AB
  node.add(CrossFeature({2, 3}));  // CD
  auto cands = candidate_crosses(node);
  CrossFeature abcd({0, 1, 2, 3});
  CHECK(std::find(cands.begin(), cands.end(), abcd) != cands.end());
  bool found = false;
  for (const auto& child : expand_children(node)) found |= child.contains(abcd);
  CHECK(found);
}

TEST_CASE("root expansion count is d choose 2") {
  for (std::size_t d = 2; d <= 12; ++d) {
    CHECK(expand_children(FeatureSet::originals(d)).size() == d * (d - 1) / 2);
  }
}

TEST_CASE("closure of pairwise unions spans all nonempty subsets") {
  // Subset-enumeration oracle for the 2^d - 1 space accounting.
  for (std::size_t d = 2; d <= 10; ++d) {
    std::set<std::vector<BaseFieldId>> reached;
    std::vector<CrossFeature> frontier;
    for (std::size_t i = 0; i < d; ++i) {
      frontier.push_back(CrossFeature::single(static_cast<BaseFieldId>(i)));
      reached.insert({static_cast<BaseFieldId>(i)});
    }
    bool grew = true;
    while (grew) {
      grew = false;
      const auto snapshot = frontier;
      for (std::size_t i = 0; i < snapshot.size(); ++i) {
        for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
          CrossFeature u = CrossFeature::cross_of(snapshot[i], snapshot[j]);
          std::vector<BaseFieldId> key(u.constituents().begin(), u.constituents().end());
          if (reached.insert(key).second) {
            frontier.push_back(u);
            grew = true;
          }
        }
      }
    }
    CHECK(reached.size() == (std::size_t{1} << d) - 1);
  }
}

TEST_CASE("feature sets keep originals and dedupe members") {
  FeatureSet s = FeatureSet::originals(3);
  CHECK(s.size() == 3);
  s.add(CrossFeature({0, 1}));
  s.add(CrossFeature({1, 0}));
  CHECK(s.size() == 4);
  CHECK(s.cross_count() == 1);
  CHECK(s.contains(CrossFeature({0, 1})));
}

TEST_CASE("cross names join base field names") {
  std::vector<std::string> names = {"age@10", "job", "city"};
  CHECK(cross_name(CrossFeature({1}), names) == "job");
  CHECK(cross_name(CrossFeature({2, 0}), names) == "age@10*city");
}
