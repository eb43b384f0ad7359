#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crossfeat/hashing.hpp"

namespace crossfeat {

using BaseFieldId = std::uint16_t;

// A cross feature is a canonical set of base field ids; order 1 means an
// original (base) field. Two crosses are equal iff their constituent sets are.
class CrossFeature {
 public:
  CrossFeature() = default;
  explicit CrossFeature(std::vector<BaseFieldId> ids);  // sorts + dedupes
  static CrossFeature single(BaseFieldId id);
  static CrossFeature cross_of(const CrossFeature& a, const CrossFeature& b);  // set union

  std::span<const BaseFieldId> constituents() const { return ids_; }
  std::size_t order() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  std::uint64_t digest(const HashConfig& cfg) const { return cross_digest(cfg, ids_); }

  bool operator==(const CrossFeature&) const = default;
  // Lexicographic on constituent ids; use feature_order_less for rank sorts.
  auto operator<=>(const CrossFeature&) const = default;

 private:
  std::vector<BaseFieldId> ids_;
};

// Deterministic rank order: lower order first, then lexicographic constituents.
bool feature_order_less(const CrossFeature& a, const CrossFeature& b);

// A feature set: the current solution. Always contains every original field;
// members kept unique in feature_order_less order.
class FeatureSet {
 public:
  FeatureSet() = default;
  static FeatureSet originals(std::size_t base_field_count);

  bool contains(const CrossFeature& f) const;
  void add(const CrossFeature& f);  // no-op if already present
  std::span<const CrossFeature> members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  std::size_t cross_count() const;  // members with order >= 2

  bool operator==(const FeatureSet&) const = default;

 private:
  std::vector<CrossFeature> members_;  // sorted by feature_order_less, unique
};

// All distinct new crosses reachable from `node` by one pair-wise crossing of
// its members: union(f, g) for every unordered pair, dropping unions already
// present in the node. Result sorted by feature_order_less.
std::vector<CrossFeature> candidate_crosses(const FeatureSet& node);

// One child per surviving candidate: node + that candidate.
std::vector<FeatureSet> expand_children(const FeatureSet& node);

// Human-readable name, e.g. "job*education" given per-base-field names.
std::string cross_name(const CrossFeature& f, std::span<const std::string> base_names);

}  // namespace crossfeat
