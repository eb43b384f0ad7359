#include "crossfeat/features.hpp"

#include <algorithm>
#include <set>

#include "crossfeat/error.hpp"

namespace crossfeat {

CrossFeature::CrossFeature(std::vector<BaseFieldId> ids) : ids_(std::move(ids)) {
  if (ids_.empty()) throw Error(Errc::bad_argument, "cross feature needs >= 1 constituent");
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

CrossFeature CrossFeature::single(BaseFieldId id) { return CrossFeature({id}); }

CrossFeature CrossFeature::cross_of(const CrossFeature& a, const CrossFeature& b) {
  std::vector<BaseFieldId> merged;
  merged.reserve(a.ids_.size() + b.ids_.size());
  std::merge(a.ids_.begin(), a.ids_.end(), b.ids_.begin(), b.ids_.end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  CrossFeature out;
  out.ids_ = std::move(merged);
  return out;
}

bool feature_order_less(const CrossFeature& a, const CrossFeature& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a < b;
}

FeatureSet FeatureSet::originals(std::size_t base_field_count) {
  FeatureSet s;
  s.members_.reserve(base_field_count);
  for (std::size_t i = 0; i < base_field_count; ++i) {
    s.members_.push_back(CrossFeature::single(static_cast<BaseFieldId>(i)));
  }
  return s;
}

bool FeatureSet::contains(const CrossFeature& f) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), f, feature_order_less);
  return it != members_.end() && *it == f;
}

void FeatureSet::add(const CrossFeature& f) {
  auto it = std::lower_bound(members_.begin(), members_.end(), f, feature_order_less);
  if (it != members_.end() && *it == f) return;
  members_.insert(it, f);
}

std::size_t FeatureSet::cross_count() const {
  std::size_t n = 0;
  for (const auto& m : members_) {
    if (m.order() >= 2) ++n;
  }
  return n;
}

std::vector<CrossFeature> candidate_crosses(const FeatureSet& node) {
  std::set<CrossFeature> seen;
  auto members = node.members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      CrossFeature u = CrossFeature::cross_of(members[i], members[j]);
      if (u == members[i] || u == members[j]) continue;  // one subsumes the other
      if (node.contains(u)) continue;
      seen.insert(std::move(u));
    }
  }
  std::vector<CrossFeature> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), feature_order_less);
  return out;
}

std::vector<FeatureSet> expand_children(const FeatureSet& node) {
  std::vector<FeatureSet> children;
  for (const auto& cand : candidate_crosses(node)) {
    FeatureSet child = node;
    child.add(cand);
    children.push_back(std::move(child));
  }
  return children;
}

std::string cross_name(const CrossFeature& f, std::span<const std::string> base_names) {
  std::string out;
  for (std::size_t i = 0; i < f.constituents().size(); ++i) {
    if (i) out += '*';
    BaseFieldId id = f.constituents()[i];
    out += id < base_names.size() ? base_names[id] : ("#" + std::to_string(id));
  }
  return out;
}

}  // namespace crossfeat
