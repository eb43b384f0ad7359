#include "crossfeat/dataset.hpp"

#include "crossfeat/error.hpp"

namespace crossfeat {

std::string base_field_name(const FeatureSchema& schema, std::size_t field_index,
                            std::uint32_t granularity) {
  const std::string& col = schema.fields.at(field_index).name;
  if (granularity == 0) return col;
  return col + "@" + std::to_string(granularity);
}

std::vector<BaseField> make_base_fields(const FeatureSchema& schema,
                                        const DiscretizationSpec& disc) {
  std::vector<BaseField> out;
  for (std::size_t i = 0; i < schema.fields.size(); ++i) {
    if (schema.fields[i].kind == FieldKind::categorical) {
      out.push_back({base_field_name(schema, i, 0), i, 0});
    } else {
      const FieldDiscretization* fd = disc.for_field(i);
      if (!fd) throw Error(Errc::field_mismatch,
                           "no discretization for numeric field '" + schema.fields[i].name + "'");
      for (std::uint32_t g : fd->levels) {
        out.push_back({base_field_name(schema, i, g), i, g});
      }
    }
  }
  if (out.size() > 65535) throw Error(Errc::bad_config, "too many base fields");
  return out;
}

EncodedDataset encode_dataset(const RawTable& filled, std::span<const BaseField> base_fields,
                              const DiscretizationSpec& disc, const HashConfig& cfg) {
  cfg.validate();
  EncodedDataset out;
  out.labels = filled.labels;
  out.buckets.resize(base_fields.size());
  const std::size_t n = filled.rows();

  for (std::size_t f = 0; f < base_fields.size(); ++f) {
    const BaseField& bf = base_fields[f];
    auto& col = out.buckets[f];
    col.resize(n);
    const std::uint32_t field_index = static_cast<std::uint32_t>(f);
    if (bf.granularity == 0) {
      const auto& tokens = std::get<CategoricalColumn>(filled.columns.at(bf.source_field)).tokens;
      for (std::size_t r = 0; r < n; ++r) {
        col[r] = hash_base_token(cfg, field_index, tokens[r]);
      }
    } else {
      const FieldDiscretization* fd = disc.for_field(bf.source_field);
      if (!fd) throw Error(Errc::field_mismatch, "missing discretization for base field");
      const auto& values = std::get<NumericColumn>(filled.columns.at(bf.source_field)).values;
      for (std::size_t r = 0; r < n; ++r) {
        col[r] = hash_base_bin(cfg, field_index, fd->binning.bin_of(values[r], bf.granularity));
      }
    }
  }
  return out;
}

std::vector<std::string> base_field_names(std::span<const BaseField> base_fields) {
  std::vector<std::string> names;
  names.reserve(base_fields.size());
  for (const auto& bf : base_fields) names.push_back(bf.name);
  return names;
}

}  // namespace crossfeat
