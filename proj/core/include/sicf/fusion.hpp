#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sicf/uncertainty.hpp"

namespace sicf {

inline constexpr const char* kCoverageDegenerate = "coverage-degenerate";

/// Raw per-dialogue scores; lower is better for all three.
struct ScoreBundle {
  std::string dialogue_id;
  double lambda_sein = 0.0;
  double lambda_cov = 0.0;
  double lambda_fai = 0.0;
  std::set<std::string> flags;
  PhiConfig phi;
  std::size_t representative = 0;  // index of the representative candidate
};

struct FusionWeights {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
};

struct RankRow {
  std::string dialogue_id;
  std::size_t delta_sein = 0;
  std::size_t delta_cov = 0;
  std::size_t delta_fai = 0;
  double lambda_sicf = 0.0;
};

/// Fused ranks; rows follow the order of the input bundles.
struct RankTable {
  std::vector<RankRow> rows;
  FusionWeights weights;

  std::size_t size() const { return rows.size(); }
};

/// Rank numbers for a descending sort by value (ties: id ascending). The
/// largest value gets 1, the smallest gets N.
std::vector<std::size_t> rank_scores(std::span<const double> values,
                                     std::span<const std::string> ids);

/// (alpha*d_sein + beta*d_cov + gamma*d_fai) / 3N.
double fused_score(const RankRow& row, const FusionWeights& w, std::size_t n);

RankTable fuse_sicf(std::span<const ScoreBundle> bundles, const FusionWeights& weights = {});

/// Ids ordered best-first: lambda_sicf descending, id ascending.
std::vector<std::string> best_first(const RankTable& table);

/// floor(N * ratio) best ids, best first.
std::vector<std::string> select_top(const RankTable& table, double ratio);

}  // namespace sicf
