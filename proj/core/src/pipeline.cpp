#include "crossfeat/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <algorithm>

#include "crossfeat/error.hpp"
#include "crossfeat/parallel.hpp"
#include "crossfeat/rng.hpp"

namespace crossfeat {

namespace {

using nlohmann::json;

const std::vector<std::string> kKnownConfigKeys = {
    "seed",           "validation_fraction", "max_runtime_seconds", "max_cross_features",
    "performance_guard", "bucket_count",     "granularities",       "small_data_threshold",
    "batch_size",     "hyper",               "timestamp",           "workers"};

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(Errc::bad_config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::bad_config, "config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKnownConfigKeys.begin(), kKnownConfigKeys.end(), key) ==
        kKnownConfigKeys.end()) {
      throw Error(Errc::bad_config, "unknown config key '" + key + "'");
    }
  }

  RunConfig cfg;
  try {
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("validation_fraction")) {
      cfg.validation_fraction = doc.at("validation_fraction").get<double>();
    }
    if (doc.contains("max_runtime_seconds") && !doc.at("max_runtime_seconds").is_null()) {
      cfg.max_runtime_seconds = doc.at("max_runtime_seconds").get<double>();
    }
    if (doc.contains("max_cross_features") && !doc.at("max_cross_features").is_null()) {
      cfg.max_cross_features = doc.at("max_cross_features").get<std::size_t>();
    }
    if (doc.contains("performance_guard")) {
      cfg.performance_guard = doc.at("performance_guard").get<bool>();
    }
    if (doc.contains("bucket_count")) {
      cfg.bucket_count = doc.at("bucket_count").get<std::uint32_t>();
    }
    if (doc.contains("granularities")) {
      cfg.granularities = doc.at("granularities").get<std::vector<std::uint32_t>>();
    }
    if (doc.contains("small_data_threshold")) {
      cfg.small_data_threshold = doc.at("small_data_threshold").get<std::size_t>();
    }
    if (doc.contains("batch_size")) cfg.batch_size = doc.at("batch_size").get<std::size_t>();
    if (doc.contains("timestamp")) {
      cfg.artifact_timestamp = doc.at("timestamp").get<std::uint64_t>();
    }
    if (doc.contains("workers")) cfg.workers = doc.at("workers").get<std::size_t>();
    if (doc.contains("hyper")) {
      const auto& h = doc.at("hyper");
      LRHyperParams hp;
      hp.alpha = h.at("alpha").get<double>();
      hp.l1 = h.at("l1").get<double>();
      hp.l2 = h.at("l2").get<double>();
      hp.batch_size = cfg.batch_size;
      cfg.hyper_override = hp;
    }
  } catch (const json::exception& e) {
    throw Error(Errc::bad_config, std::string("config value malformed: ") + e.what());
  }

  if (!(cfg.validation_fraction > 0.0 && cfg.validation_fraction < 1.0)) {
    throw Error(Errc::bad_config, "validation_fraction must lie in (0,1)");
  }
  if (cfg.batch_size == 0) throw Error(Errc::bad_config, "batch_size must be positive");
  HashConfig{cfg.bucket_count, 0}.validate();
  return cfg;
}

RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

FitResult fit(const RawTable& training_table, const RunConfig& config,
              std::ostream* progress_log, const std::atomic<bool>* interrupt) {
  const std::size_t workers = config.workers ? config.workers : default_worker_count();
  HashConfig hash{config.bucket_count, derive_seed(config.seed, "hash")};
  hash.validate();

  auto split = split_train_validation(training_table, config.validation_fraction, config.seed);

  PreprocessOptions popts;
  popts.granularities = config.granularities;
  popts.batch_size = config.batch_size;
  popts.block_rule = {config.small_data_threshold};
  popts.workers = workers;
  PreprocessResult pre = preprocess(split.train, split.valid, hash, popts);

  const FeatureSet originals = FeatureSet::originals(pre.base_fields.size());
  const BlockPartition tune_part =
      partition_blocks(pre.train.rows(), 1, popts.block_rule);

  TuneResult tune;
  if (config.hyper_override) {
    tune.best = *config.hyper_override;
    tune.best.batch_size = config.batch_size;
    tune.evaluated = 0;
  } else {
    tune = tune_hyperparams(pre.train, tune_part, pre.valid, originals, hash,
                            config.batch_size, workers);
  }

  SearchData data;
  data.train = &pre.train;
  data.valid = &pre.valid;
  data.hash = &hash;
  data.block_rule = popts.block_rule;
  data.workers = workers;

  TerminationConfig term;
  term.max_runtime_seconds = config.max_runtime_seconds;
  term.max_cross_features = config.max_cross_features;
  term.performance_guard = config.performance_guard;

  FitResult result;
  result.base_field_names = base_field_names(pre.base_fields);
  result.search = beam_search(data, result.base_field_names, term, tune.best, progress_log,
                              interrupt);
  result.tune = tune;

  // Quantize to the artifact's 32-bit storage; reported metrics and the saved
  // model then agree bit-for-bit with the producer.
  ProducerArtifact art;
  art.schema = training_table.schema;
  art.fill = pre.fill;
  art.disc = pre.disc;
  art.base_fields = pre.base_fields;
  art.hash = hash;
  art.feature_set = result.search.solution;
  art.bias = static_cast<double>(static_cast<float>(result.search.model.bias));
  art.weights.reserve(result.search.model.weights.size());
  for (const auto& fw : result.search.model.weights) art.weights.push_back(fw.to_dense_f32());

  const EvalMetric quantized = [&] {
    LRModel q = result.search.model;
    q.bias = art.bias;
    for (std::size_t i = 0; i < q.weights.size(); ++i) {
      for (std::uint32_t b : q.weights[i].live_buckets()) {
        q.weights[i].set(b, static_cast<double>(static_cast<float>(q.weights[i].get(b))));
      }
    }
    return evaluate_model(q, pre.valid, hash);
  }();

  art.meta.seed = config.seed;
  art.meta.solution_auc = quantized.auc;
  art.meta.base_auc = result.search.base_auc;
  art.meta.iterations = result.search.iteration;
  art.meta.stop_reason = stop_reason_name(result.search.stop_reason);
  art.meta.timestamp = config.artifact_timestamp;
  result.artifact = std::move(art);
  return result;
}

RawRowBatch raw_rows_from_table(const RawTable& table) {
  RawRowBatch batch;
  const std::size_t n = table.rows();
  const std::size_t nf = table.schema.fields.size();
  batch.storage.resize(n);
  batch.rows.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    batch.storage[r].resize(nf);
    batch.rows[r].resize(nf);
  }
  for (std::size_t f = 0; f < nf; ++f) {
    if (table.schema.fields[f].kind == FieldKind::numerical) {
      const auto& vals = std::get<NumericColumn>(table.columns[f]).values;
      for (std::size_t r = 0; r < n; ++r) {
        batch.rows[r][f].num = vals[r];
        batch.rows[r][f].missing = is_missing_numeric(vals[r]);
      }
    } else {
      const auto& toks = std::get<CategoricalColumn>(table.columns[f]).tokens;
      for (std::size_t r = 0; r < n; ++r) {
        batch.storage[r][f] = toks[r];
        batch.rows[r][f].cat = batch.storage[r][f];
        batch.rows[r][f].missing = toks[r].empty();
      }
    }
  }
  return batch;
}

}  // namespace crossfeat
