#include "crossfeat/schema.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "crossfeat/error.hpp"

namespace crossfeat {

const char* field_kind_name(FieldKind k) {
  return k == FieldKind::numerical ? "numerical" : "categorical";
}

FieldKind field_kind_from_name(const std::string& name) {
  if (name == "numerical") return FieldKind::numerical;
  if (name == "categorical") return FieldKind::categorical;
  throw Error(Errc::bad_schema, "unknown field kind '" + name + "'");
}

std::optional<std::size_t> FeatureSchema::field_index(const std::string& name) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t FeatureSchema::numeric_field_count() const {
  std::size_t n = 0;
  for (const auto& f : fields) {
    if (f.kind == FieldKind::numerical) ++n;
  }
  return n;
}

void FeatureSchema::validate() const {
  if (fields.empty()) throw Error(Errc::bad_schema, "schema declares no fields");
  if (label.empty()) throw Error(Errc::missing_label, "schema declares no label column");
  std::unordered_set<std::string> seen;
  for (const auto& f : fields) {
    if (f.name.empty()) throw Error(Errc::bad_schema, "empty field name");
    if (!seen.insert(f.name).second) {
      throw Error(Errc::bad_schema, "duplicate field name '" + f.name + "'");
    }
  }
  if (seen.count(label)) {
    throw Error(Errc::bad_schema, "label column '" + label + "' also declared as a field");
  }
}

FeatureSchema parse_schema_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_schema, std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("fields") || !doc.contains("label")) {
    throw Error(Errc::bad_schema, "schema must be an object with 'fields' and 'label'");
  }
  FeatureSchema schema;
  for (const auto& f : doc.at("fields")) {
    if (!f.is_object() || !f.contains("name") || !f.contains("kind")) {
      throw Error(Errc::bad_schema, "each field needs 'name' and 'kind'");
    }
    schema.fields.push_back(
        {f.at("name").get<std::string>(), field_kind_from_name(f.at("kind").get<std::string>())});
  }
  schema.label = doc.at("label").get<std::string>();
  schema.validate();
  return schema;
}

std::string schema_to_json(const FeatureSchema& schema) {
  nlohmann::json fields = nlohmann::json::array();
  for (const auto& f : schema.fields) {
    fields.push_back({{"name", f.name}, {"kind", field_kind_name(f.kind)}});
  }
  nlohmann::json doc{{"fields", std::move(fields)}, {"label", schema.label}};
  return doc.dump();
}

FeatureSchema load_schema_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open schema file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schema_json(buf.str());
}

}  // namespace crossfeat
