#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sicf/fusion.hpp"
#include "sicf/jsonl.hpp"
#include "sicf/metrics.hpp"
#include "sicf/pipeline.hpp"

namespace sicf::app {

enum class ProviderMode { kSynthetic, kFile };

/// Flat key-value run configuration (a JSON object on disk). Relative paths
/// are resolved against the directory of the config file.
struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path candidates;
  ProviderMode provider = ProviderMode::kSynthetic;
  std::filesystem::path embeddings;
  std::filesystem::path tags;
  std::filesystem::path nli;
  std::size_t k = 20;
  PhiConfig phi;
  FusionWeights weights;
  double ratio = 0.25;
  std::vector<MetricKind> metrics = all_metrics();
  MetricKind grid_metric = MetricKind::kRouge1;
  double labeled_ratio = 0.01;
  double unlabeled_ratio = 0.5;
  PenaltyConfig penalty;
  bool debug_matrices = false;
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  unsigned threads = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Canonical form; `threads` and `out` are excluded so the hash is stable
  /// across thread counts and output locations.
  Json canonical() const;
  std::string hash() const;

  ScoringConfig scoring() const { return {phi, penalty}; }
  Providers make_providers() const;
  Json provider_summary() const;
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const Json& doc, const std::filesystem::path& base_dir);

}  // namespace sicf::app
