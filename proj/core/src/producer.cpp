#include "crossfeat/producer.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>
#include <zlib.h>

#include "crossfeat/error.hpp"
#include "crossfeat/lr.hpp"

namespace crossfeat {

namespace {

using nlohmann::json;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size())));
}

void put_section(std::vector<std::uint8_t>& out, std::string_view name,
                 std::span<const std::uint8_t> payload) {
  put_u32(out, static_cast<std::uint32_t>(name.size()));
  out.insert(out.end(), name.begin(), name.end());
  put_u64(out, payload.size());
  put_u32(out, crc_of(payload));
  out.insert(out.end(), payload.begin(), payload.end());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 8;
    return v;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size()) {
      throw Error(Errc::checksum_mismatch, "artifact truncated");
    }
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

json fill_to_json(const FeatureSchema& schema, const FillRules& fill) {
  json arr = json::array();
  for (std::size_t i = 0; i < fill.per_field.size(); ++i) {
    json e{{"field", i}};
    if (schema.fields[i].kind == FieldKind::numerical) {
      e["median"] = fill.per_field[i].median;
    } else {
      e["token"] = fill.per_field[i].token;
    }
    arr.push_back(std::move(e));
  }
  return arr;
}

json rules_to_json(const ProducerArtifact& a) {
  json base_fields = json::array();
  for (const auto& bf : a.base_fields) {
    base_fields.push_back(
        {{"name", bf.name}, {"source", bf.source_field}, {"granularity", bf.granularity}});
  }
  json disc = json::array();
  for (const auto& fd : a.disc.numeric_fields) {
    disc.push_back({{"field", fd.field_index},
                    {"min", fd.binning.value_min},
                    {"max", fd.binning.value_max},
                    {"levels", fd.levels}});
  }
  json feature_set = json::array();
  for (const auto& f : a.feature_set.members()) {
    feature_set.push_back(std::vector<std::uint16_t>(f.constituents().begin(),
                                                     f.constituents().end()));
  }
  return json{{"base_fields", std::move(base_fields)},
              {"bias", a.bias},
              {"discretization", std::move(disc)},
              {"feature_set", std::move(feature_set)},
              {"fill", fill_to_json(a.schema, a.fill)},
              {"hash", {{"bucket_count", a.hash.bucket_count}, {"seed", a.hash.seed}}},
              {"metadata",
               {{"base_auc", a.meta.base_auc},
                {"iterations", a.meta.iterations},
                {"seed", a.meta.seed},
                {"solution_auc", a.meta.solution_auc},
                {"stop_reason", a.meta.stop_reason},
                {"timestamp", a.meta.timestamp}}}};
}

void rules_from_json(const json& doc, ProducerArtifact& a) {
  for (const auto& e : doc.at("base_fields")) {
    a.base_fields.push_back({e.at("name").get<std::string>(), e.at("source").get<std::size_t>(),
                             e.at("granularity").get<std::uint32_t>()});
  }
  for (const auto& e : doc.at("discretization")) {
    FieldDiscretization fd;
    fd.field_index = e.at("field").get<std::size_t>();
    fd.binning = {e.at("min").get<double>(), e.at("max").get<double>()};
    fd.levels = e.at("levels").get<std::vector<std::uint32_t>>();
    a.disc.numeric_fields.push_back(std::move(fd));
  }
  for (const auto& e : doc.at("feature_set")) {
    a.feature_set.add(CrossFeature(e.get<std::vector<std::uint16_t>>()));
  }
  a.fill.per_field.resize(a.schema.fields.size());
  for (const auto& e : doc.at("fill")) {
    const auto idx = e.at("field").get<std::size_t>();
    if (idx >= a.fill.per_field.size()) throw Error(Errc::checksum_mismatch, "bad fill index");
    if (e.contains("median")) {
      a.fill.per_field[idx].median = e.at("median").get<double>();
    } else {
      a.fill.per_field[idx].token = e.at("token").get<std::string>();
    }
  }
  a.bias = doc.at("bias").get<double>();
  a.hash.bucket_count = doc.at("hash").at("bucket_count").get<std::uint32_t>();
  a.hash.seed = doc.at("hash").at("seed").get<std::uint64_t>();
  const auto& meta = doc.at("metadata");
  a.meta.base_auc = meta.at("base_auc").get<double>();
  a.meta.iterations = meta.at("iterations").get<std::uint64_t>();
  a.meta.seed = meta.at("seed").get<std::uint64_t>();
  a.meta.solution_auc = meta.at("solution_auc").get<double>();
  a.meta.stop_reason = meta.at("stop_reason").get<std::string>();
  a.meta.timestamp = meta.at("timestamp").get<std::uint64_t>();
}

std::vector<std::uint8_t> str_bytes(const std::string& s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

void validate_artifact(const ProducerArtifact& a) {
  a.schema.validate();
  a.hash.validate();
  if (a.weights.size() != a.feature_set.size()) {
    throw Error(Errc::field_mismatch, "weight lane count != feature count");
  }
  for (const auto& lane : a.weights) {
    if (lane.size() != a.hash.bucket_count) {
      throw Error(Errc::field_mismatch, "weight lane length != bucket count");
    }
  }
  for (const auto& f : a.feature_set.members()) {
    if (f.constituents().back() >= a.base_fields.size()) {
      throw Error(Errc::field_mismatch, "feature references unknown base field");
    }
  }
  for (const auto& bf : a.base_fields) {
    if (bf.source_field >= a.schema.fields.size()) {
      throw Error(Errc::field_mismatch, "base field references unknown column");
    }
    const bool numeric = a.schema.fields[bf.source_field].kind == FieldKind::numerical;
    if (numeric != (bf.granularity > 0)) {
      throw Error(Errc::field_mismatch, "base field kind does not match its column");
    }
    if (numeric && !a.disc.for_field(bf.source_field)) {
      throw Error(Errc::field_mismatch, "missing discretization for base field");
    }
  }
}

}  // namespace

std::vector<std::uint8_t> artifact_to_bytes(const ProducerArtifact& artifact) {
  validate_artifact(artifact);
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kArtifactMagic, kArtifactMagic + 4);
  put_u32(out, artifact.format_version);
  put_u32(out, 3);  // section count

  put_section(out, "schema", str_bytes(schema_to_json(artifact.schema)));
  put_section(out, "rules", str_bytes(rules_to_json(artifact).dump()));

  std::vector<std::uint8_t> weights;
  weights.reserve(artifact.weights.size() * artifact.hash.bucket_count * 4);
  for (const auto& lane : artifact.weights) {
    for (float w : lane) put_u32(weights, std::bit_cast<std::uint32_t>(w));
  }
  put_section(out, "weights", weights);
  return out;
}

ProducerArtifact artifact_from_bytes(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  auto magic = r.take(4);
  if (std::memcmp(magic.data(), kArtifactMagic, 4) != 0) {
    throw Error(Errc::bad_magic, "not a producer artifact");
  }
  const std::uint32_t version = r.u32();
  if (version != kArtifactVersion) {
    throw Error(Errc::unsupported_version, "artifact version " + std::to_string(version));
  }
  const std::uint32_t sections = r.u32();
  if (sections != 3) throw Error(Errc::checksum_mismatch, "unexpected section count");

  ProducerArtifact a;
  a.format_version = version;
  std::string schema_json, rules_json;
  std::vector<std::uint8_t> weight_bytes;
  for (std::uint32_t s = 0; s < sections; ++s) {
    const std::uint32_t name_len = r.u32();
    auto name_span = r.take(name_len);
    std::string name(name_span.begin(), name_span.end());
    const std::uint64_t payload_len = r.u64();
    const std::uint32_t crc = r.u32();
    auto payload = r.take(payload_len);
    if (crc_of(payload) != crc) {
      throw Error(Errc::checksum_mismatch, "section '" + name + "' failed CRC32");
    }
    if (name == "schema") {
      schema_json.assign(payload.begin(), payload.end());
    } else if (name == "rules") {
      rules_json.assign(payload.begin(), payload.end());
    } else if (name == "weights") {
      weight_bytes.assign(payload.begin(), payload.end());
    } else {
      throw Error(Errc::checksum_mismatch, "unknown section '" + name + "'");
    }
  }
  if (!r.done()) throw Error(Errc::checksum_mismatch, "trailing bytes after sections");

  a.schema = parse_schema_json(schema_json);
  json rules;
  try {
    rules = json::parse(rules_json);
  } catch (const json::exception& e) {
    throw Error(Errc::checksum_mismatch, std::string("rules section unparseable: ") + e.what());
  }
  try {
    rules_from_json(rules, a);
  } catch (const json::exception& e) {
    throw Error(Errc::checksum_mismatch, std::string("rules section malformed: ") + e.what());
  }

  const std::size_t expected = a.feature_set.size() * std::size_t{a.hash.bucket_count} * 4;
  if (weight_bytes.size() != expected) {
    throw Error(Errc::checksum_mismatch, "weights section has wrong length");
  }
  a.weights.resize(a.feature_set.size());
  std::size_t pos = 0;
  for (auto& lane : a.weights) {
    lane.resize(a.hash.bucket_count);
    for (auto& w : lane) {
      std::uint32_t bits = 0;
      for (int i = 0; i < 4; ++i) bits |= std::uint32_t{weight_bytes[pos++]} << (8 * i);
      w = std::bit_cast<float>(bits);
    }
  }
  validate_artifact(a);
  return a;
}

void save_artifact(const ProducerArtifact& artifact, const std::string& path) {
  const auto bytes = artifact_to_bytes(artifact);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "short write to '" + path + "'");
}

ProducerArtifact load_artifact(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return artifact_from_bytes(bytes);
}

Producer::Producer(ProducerArtifact artifact) : artifact_(std::move(artifact)) {
  validate_artifact(artifact_);
  base_disc_.resize(artifact_.base_fields.size());
  for (std::size_t f = 0; f < artifact_.base_fields.size(); ++f) {
    base_disc_[f] = artifact_.base_fields[f].granularity
                        ? artifact_.disc.for_field(artifact_.base_fields[f].source_field)
                        : nullptr;
  }
  features_.reserve(artifact_.feature_set.size());
  for (std::size_t i = 0; i < artifact_.feature_set.size(); ++i) {
    const CrossFeature& f = artifact_.feature_set.members()[i];
    FeaturePlan plan;
    plan.digest = f.digest(artifact_.hash);
    plan.ids.assign(f.constituents().begin(), f.constituents().end());
    plan.lane = artifact_.weights[i].data();
    features_.push_back(std::move(plan));
  }
}

Producer::Scratch Producer::make_scratch() const {
  return Scratch{std::vector<std::uint32_t>(artifact_.base_fields.size(), 0)};
}

void Producer::fill_base_buckets(std::span<const RawValue> row,
                                 std::vector<std::uint32_t>& base) const {
  if (row.size() != artifact_.schema.fields.size()) {
    throw Error(Errc::field_mismatch, "row width does not match schema");
  }
  for (std::size_t f = 0; f < artifact_.base_fields.size(); ++f) {
    const BaseField& bf = artifact_.base_fields[f];
    const RawValue& v = row[bf.source_field];
    const std::uint32_t field_index = static_cast<std::uint32_t>(f);
    if (bf.granularity == 0) {
      std::string_view token = v.cat;
      if (v.missing || token.empty()) token = artifact_.fill.per_field[bf.source_field].token;
      base[f] = hash_base_token(artifact_.hash, field_index, token);
    } else {
      double x = v.num;
      if (v.missing || x != x) x = artifact_.fill.per_field[bf.source_field].median;
      base[f] = hash_base_bin(artifact_.hash, field_index,
                              base_disc_[f]->binning.bin_of(x, bf.granularity));
    }
  }
}

std::uint32_t Producer::plan_bucket(const FeaturePlan& plan,
                                    const std::vector<std::uint32_t>& base) const {
  if (plan.ids.size() == 1) return base[plan.ids[0]];
  std::uint64_t h = plan.digest;
  for (std::uint16_t id : plan.ids) h = mix64(h ^ (std::uint64_t{base[id]} + 1));
  return static_cast<std::uint32_t>(h) & artifact_.hash.mask();
}

void Producer::transform_row(std::span<const RawValue> row, Scratch& scratch,
                             std::span<std::uint32_t> out) const {
  if (out.size() < features_.size()) {
    throw Error(Errc::bad_argument, "output span too small");
  }
  fill_base_buckets(row, scratch.base_buckets);
  for (std::size_t i = 0; i < features_.size(); ++i) {
    out[i] = plan_bucket(features_[i], scratch.base_buckets);
  }
}

double Producer::predict_buckets(std::span<const std::uint32_t> feature_buckets) const {
  double z = artifact_.bias;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    z += static_cast<double>(features_[i].lane[feature_buckets[i]]);
  }
  return sigmoid(z);
}

double Producer::predict_row(std::span<const RawValue> row, Scratch& scratch) const {
  fill_base_buckets(row, scratch.base_buckets);
  double z = artifact_.bias;
  for (const FeaturePlan& plan : features_) {
    z += static_cast<double>(plan.lane[plan_bucket(plan, scratch.base_buckets)]);
  }
  return sigmoid(z);
}

LatencyReport bench_latency(const Producer& producer,
                            const std::vector<std::vector<RawValue>>& rows,
                            std::size_t repetitions) {
  if (rows.size() < 1000) throw Error(Errc::bad_argument, "bench needs >= 1000 rows");
  if (repetitions == 0) throw Error(Errc::bad_argument, "repetitions must be >= 1");

  Producer::Scratch scratch = producer.make_scratch();
  double sink = 0.0;
  for (const auto& row : rows) sink += producer.predict_row(row, scratch);  // warm-up

  std::vector<std::uint32_t> lat_ns;
  lat_ns.reserve(rows.size() * repetitions);
  using clock = std::chrono::steady_clock;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    for (const auto& row : rows) {
      const auto t0 = clock::now();
      sink += producer.predict_row(row, scratch);
      const auto t1 = clock::now();
      lat_ns.push_back(static_cast<std::uint32_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }
  }
  // Keep the accumulated probability alive so the hot loop cannot be elided.
  volatile double guard = sink;
  (void)guard;

  std::sort(lat_ns.begin(), lat_ns.end());
  auto pct = [&](double q) {
    const std::size_t idx =
        static_cast<std::size_t>(q * static_cast<double>(lat_ns.size() - 1));
    return static_cast<double>(lat_ns[idx]) / 1000.0;
  };
  double total_ns = 0.0;
  for (auto v : lat_ns) total_ns += static_cast<double>(v);

  LatencyReport report;
  report.measured_rows = lat_ns.size();
  report.p50_us = pct(0.50);
  report.p95_us = pct(0.95);
  report.p99_us = pct(0.99);
  report.mean_us = total_ns / 1000.0 / static_cast<double>(lat_ns.size());
  report.rows_per_second = 1e9 * static_cast<double>(lat_ns.size()) / total_ns;
  return report;
}

}  // namespace crossfeat
