#include "app/run_config.hpp"

#include <cmath>
#include <set>

#include "sicf/errors.hpp"
#include "sicf/text.hpp"

namespace sicf::app {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "corpus", "candidates", "provider", "embeddings", "tags", "nli", "k", "phi",
      "bnn_kind", "alpha", "beta", "gamma", "ratio", "metrics", "grid_metric",
      "labeled_ratio", "unlabeled_ratio", "coverage_penalty", "faithfulness_penalty",
      "debug_matrices", "out", "seed", "threads"};
  return keys;
}

template <typename T>
T get_as(const Json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config field \"" + key + "\" has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

}  // namespace

RunConfig run_config_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().count(key)) throw ConfigError("unknown config field \"" + key + "\"");
    if (value.is_object()) throw ConfigError("config field \"" + key + "\" must be flat");
  }
  RunConfig c;
  auto path_field = [&](const char* key, std::filesystem::path& dst) {
    if (doc.contains(key)) dst = resolve(base_dir, get_as<std::string>(doc, key));
  };
  path_field("corpus", c.corpus);
  path_field("candidates", c.candidates);
  path_field("embeddings", c.embeddings);
  path_field("tags", c.tags);
  path_field("nli", c.nli);
  path_field("out", c.out);
  if (doc.contains("provider")) {
    const auto mode = get_as<std::string>(doc, "provider");
    if (mode == "synthetic") c.provider = ProviderMode::kSynthetic;
    else if (mode == "file") c.provider = ProviderMode::kFile;
    else throw ConfigError("config field \"provider\" must be synthetic|file");
  }
  if (doc.contains("k")) {
    const auto k = get_as<long long>(doc, "k");
    if (k < 1) throw ConfigError("config field \"k\" must be >= 1");
    c.k = static_cast<std::size_t>(k);
  }
  try {
    if (doc.contains("phi")) c.phi.method = parse_phi_method(get_as<std::string>(doc, "phi"));
    if (doc.contains("bnn_kind")) c.phi.bnn_kind = parse_bnn_kind(get_as<std::string>(doc, "bnn_kind"));
    if (doc.contains("metrics")) {
      c.metrics.clear();
      for (const auto& m : get_as<std::vector<std::string>>(doc, "metrics")) c.metrics.push_back(parse_metric(m));
    }
    if (doc.contains("grid_metric")) c.grid_metric = parse_metric(get_as<std::string>(doc, "grid_metric"));
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  if (doc.contains("alpha")) c.weights.alpha = get_as<double>(doc, "alpha");
  if (doc.contains("beta")) c.weights.beta = get_as<double>(doc, "beta");
  if (doc.contains("gamma")) c.weights.gamma = get_as<double>(doc, "gamma");
  if (doc.contains("ratio")) c.ratio = get_as<double>(doc, "ratio");
  if (doc.contains("labeled_ratio")) c.labeled_ratio = get_as<double>(doc, "labeled_ratio");
  if (doc.contains("unlabeled_ratio")) c.unlabeled_ratio = get_as<double>(doc, "unlabeled_ratio");
  if (doc.contains("coverage_penalty")) c.penalty.coverage = get_as<double>(doc, "coverage_penalty");
  if (doc.contains("faithfulness_penalty") && !doc["faithfulness_penalty"].is_null()) {
    c.penalty.faithfulness = get_as<double>(doc, "faithfulness_penalty");
  }
  if (doc.contains("debug_matrices")) c.debug_matrices = get_as<bool>(doc, "debug_matrices");
  if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc, "seed");
  if (doc.contains("threads")) {
    const auto t = get_as<long long>(doc, "threads");
    if (t < 1) throw ConfigError("config field \"threads\" must be >= 1");
    c.threads = static_cast<unsigned>(t);
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = read_json(path);
  } catch (const SchemaError& e) {
    throw ConfigError(e.what());
  }
  return run_config_from_json(doc, path.parent_path());
}

void RunConfig::validate() const {
  auto unit = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!unit(ratio)) throw ConfigError("ratio must lie in [0, 1]");
  if (!unit(labeled_ratio) || !unit(unlabeled_ratio)) {
    throw ConfigError("labeled_ratio/unlabeled_ratio must lie in [0, 1]");
  }
  for (double w : {weights.alpha, weights.beta, weights.gamma}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("alpha/beta/gamma must be finite and >= 0");
  }
  if (weights.alpha == 0.0 && weights.beta == 0.0 && weights.gamma == 0.0) {
    throw ConfigError("alpha, beta and gamma must not all be zero");
  }
  if (metrics.empty()) throw ConfigError("metrics must name at least one metric");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (provider == ProviderMode::kFile && (embeddings.empty() || tags.empty() || nli.empty())) {
    throw ConfigError("provider=file needs embeddings, tags and nli paths");
  }
}

Json RunConfig::canonical() const {
  Json j;
  j["corpus"] = corpus.generic_string();
  j["candidates"] = candidates.generic_string();
  j["provider"] = provider == ProviderMode::kFile ? "file" : "synthetic";
  j["embeddings"] = embeddings.generic_string();
  j["tags"] = tags.generic_string();
  j["nli"] = nli.generic_string();
  j["k"] = k;
  j["phi"] = to_string(phi.method);
  j["bnn_kind"] = to_string(phi.bnn_kind);
  j["alpha"] = weights.alpha;
  j["beta"] = weights.beta;
  j["gamma"] = weights.gamma;
  j["ratio"] = ratio;
  std::vector<std::string> ms;
  for (auto m : metrics) ms.emplace_back(to_string(m));
  j["metrics"] = ms;
  j["grid_metric"] = to_string(grid_metric);
  j["labeled_ratio"] = labeled_ratio;
  j["unlabeled_ratio"] = unlabeled_ratio;
  j["coverage_penalty"] = penalty.coverage;
  j["faithfulness_penalty"] = penalty.faithfulness ? Json(*penalty.faithfulness) : Json(nullptr);
  j["debug_matrices"] = debug_matrices;
  j["seed"] = seed;
  return j;
}

std::string RunConfig::hash() const { return hex64(fnv1a64(canonical().dump())); }

Providers RunConfig::make_providers() const {
  if (provider == ProviderMode::kFile) return Providers::from_files(embeddings, tags, nli);
  return Providers::synthetic();
}

Json RunConfig::provider_summary() const {
  if (provider == ProviderMode::kFile) {
    return {{"mode", "file"},
            {"embeddings", embeddings.generic_string()},
            {"tags", tags.generic_string()},
            {"nli", nli.generic_string()}};
  }
  return {{"mode", "synthetic"}};
}

}  // namespace sicf::app
