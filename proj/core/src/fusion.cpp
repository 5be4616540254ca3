#include "sicf/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sicf/errors.hpp"
#include "sicf/text.hpp"

namespace sicf {

std::vector<std::size_t> rank_scores(std::span<const double> values,
                                     std::span<const std::string> ids) {
  if (values.size() != ids.size()) throw ArgumentError("values and ids differ in length");
  if (values.empty()) throw ArgumentError("need at least one value to rank");
  for (double v : values) {
    if (std::isnan(v)) throw ArgumentError("cannot rank NaN");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return ids[a] < ids[b];
  });
  std::vector<std::size_t> delta(values.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) delta[order[pos]] = pos + 1;
  return delta;
}

double fused_score(const RankRow& row, const FusionWeights& w, std::size_t n) {
  return (w.alpha * static_cast<double>(row.delta_sein) +
          w.beta * static_cast<double>(row.delta_cov) +
          w.gamma * static_cast<double>(row.delta_fai)) /
         (3.0 * static_cast<double>(n));
}

RankTable fuse_sicf(std::span<const ScoreBundle> bundles, const FusionWeights& weights) {
  if (bundles.empty()) throw ArgumentError("need at least one score bundle");
  for (double c : {weights.alpha, weights.beta, weights.gamma}) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ArgumentError("fusion weights must be finite and >= 0");
  }
  if (weights.alpha == 0.0 && weights.beta == 0.0 && weights.gamma == 0.0) {
    throw ArgumentError("fusion weights must not all be zero");
  }

  const std::size_t n = bundles.size();
  std::vector<std::string> ids;
  std::vector<double> sein, cov, fai;
  for (const auto& b : bundles) {
    if (!std::isfinite(b.lambda_sein) || !std::isfinite(b.lambda_cov) ||
        !std::isfinite(b.lambda_fai)) {
      throw ArgumentError("non-finite score for dialogue " + b.dialogue_id);
    }
    ids.push_back(b.dialogue_id);
    sein.push_back(b.lambda_sein);
    cov.push_back(b.lambda_cov);
    fai.push_back(b.lambda_fai);
  }
  const auto d_sein = rank_scores(sein, ids);
  const auto d_cov = rank_scores(cov, ids);
  const auto d_fai = rank_scores(fai, ids);

  RankTable table;
  table.weights = weights;
  table.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RankRow row{ids[i], d_sein[i], d_cov[i], d_fai[i], 0.0};
    row.lambda_sicf = fused_score(row, weights, n);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<std::string> best_first(const RankTable& table) {
  std::vector<const RankRow*> rows;
  for (const auto& r : table.rows) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](const RankRow* a, const RankRow* b) {
    if (a->lambda_sicf != b->lambda_sicf) return a->lambda_sicf > b->lambda_sicf;
    return a->dialogue_id < b->dialogue_id;
  });
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (const auto* r : rows) ids.push_back(r->dialogue_id);
  return ids;
}

std::vector<std::string> select_top(const RankTable& table, double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ArgumentError("selection ratio must lie in [0, 1]");
  auto ids = best_first(table);
  ids.resize(budget_count(ids.size(), ratio));
  return ids;
}

}  // namespace sicf
