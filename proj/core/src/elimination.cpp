#include "sicf/elimination.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "sicf/errors.hpp"
#include "sicf/text.hpp"

namespace sicf {

std::vector<double> elimination_ratios() {
  std::vector<double> r;
  for (int i = 0; i < 10; ++i) r.push_back(static_cast<double>(i) / 10.0);
  return r;
}

ElimCurve elimination_curve(std::span<const EvalSample> samples,
                            std::span<const std::string> worst_first, MetricKind metric,
                            const MetricScorer& scorer) {
  if (samples.empty()) throw ArgumentError("elimination needs at least one sample");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!index.emplace(samples[i].id, i).second) {
      throw ArgumentError("duplicate sample id " + samples[i].id);
    }
  }
  if (worst_first.size() != samples.size()) {
    throw ArgumentError("quality order is not a permutation of the sample ids");
  }
  std::vector<std::size_t> order;
  std::vector<bool> seen(samples.size(), false);
  for (const auto& id : worst_first) {
    auto it = index.find(id);
    if (it == index.end() || seen[it->second]) {
      throw ArgumentError("quality order is not a permutation of the sample ids");
    }
    seen[it->second] = true;
    order.push_back(it->second);
  }

  std::vector<double> predicted(samples.size()), replaced(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    predicted[i] = scorer.score(metric, samples[i].prediction, samples[i].reference);
    replaced[i] = scorer.score(metric, samples[i].reference, samples[i].reference);
  }

  ElimCurve curve;
  curve.ratios = elimination_ratios();
  const double n = static_cast<double>(samples.size());
  for (double r : curve.ratios) {
    const std::size_t cut = budget_count(samples.size(), r);
    double total = 0.0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const std::size_t i = order[pos];
      total += pos < cut ? replaced[i] : predicted[i];
    }
    curve.values.push_back(total / n);
  }
  curve.mean_0_50 = std::accumulate(curve.values.begin(), curve.values.begin() + 6, 0.0) / 6.0;
  curve.mean_0_90 = std::accumulate(curve.values.begin(), curve.values.end(), 0.0) / 10.0;
  return curve;
}

std::vector<std::string> pseudo_oracle_order(std::span<const EvalSample> samples,
                                             MetricKind metric, const MetricScorer& scorer) {
  std::vector<std::pair<double, const std::string*>> scored;
  for (const auto& s : samples) {
    scored.emplace_back(scorer.score(metric, s.prediction, s.reference), &s.id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return *a.second < *b.second;
  });
  std::vector<std::string> out;
  for (const auto& [v, id] : scored) out.push_back(*id);
  return out;
}

std::vector<std::string> random_order(std::span<const EvalSample> samples, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& s : samples) ids.push_back(s.id);
  std::uint64_t state = seed ^ 0x5eed5eed5eed5eedULL;
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % i;
    std::uint64_t x;
    do {
      x = splitmix64(state);
    } while (x >= limit);
    std::swap(ids[i - 1], ids[x % i]);
  }
  return ids;
}

double improved_ratio(double ms_m, double ms_ini, double ms_ora) {
  if (ms_ora == ms_ini) {
    throw UndefinedRatioError("improved ratio undefined: pseudo-oracle score equals initial score");
  }
  return (ms_m - ms_ini) / (ms_ora - ms_ini);
}

}  // namespace sicf
