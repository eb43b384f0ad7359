#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace crossfeat {

enum class FieldKind { numerical, categorical };

const char* field_kind_name(FieldKind k);
FieldKind field_kind_from_name(const std::string& name);

struct FieldDef {
  std::string name;
  FieldKind kind = FieldKind::categorical;

  bool operator==(const FieldDef&) const = default;
};

// Declares the input columns and the label column. Field names are unique and
// the label is not itself a field.
struct FeatureSchema {
  std::vector<FieldDef> fields;
  std::string label;

  std::optional<std::size_t> field_index(const std::string& name) const;
  std::size_t numeric_field_count() const;
  void validate() const;  // throws Error(bad_schema) on duplicate/empty names

  bool operator==(const FeatureSchema&) const = default;
};

// Schema document: {"fields":[{"name":...,"kind":"numerical"|"categorical"},...],
//                   "label": <column name>}
FeatureSchema parse_schema_json(const std::string& text);
std::string schema_to_json(const FeatureSchema& schema);

FeatureSchema load_schema_file(const std::string& path);

}  // namespace crossfeat
