#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sicf/metrics.hpp"

namespace sicf {

struct EvalSample {
  std::string id;
  std::string prediction;
  std::string reference;
};

/// Corpus metric at elimination ratios 0.0, 0.1, ..., 0.9.
struct ElimCurve {
  std::vector<double> ratios;
  std::vector<double> values;
  double mean_0_50 = 0.0;  // mean of the first six points
  double mean_0_90 = 0.0;  // mean of all ten points
};

std::vector<double> elimination_ratios();

/// For every ratio r, the first floor(N * r) ids of `worst_first` have their
/// prediction replaced by the reference; the curve point is the unweighted
/// mean per-sample metric. `worst_first` must be a permutation of the ids.
ElimCurve elimination_curve(std::span<const EvalSample> samples,
                            std::span<const std::string> worst_first, MetricKind metric,
                            const MetricScorer& scorer);

/// Ground-truth-aware order: ascending per-sample metric, ties by id.
std::vector<std::string> pseudo_oracle_order(std::span<const EvalSample> samples,
                                             MetricKind metric, const MetricScorer& scorer);

/// Seeded uniform permutation of the sample ids.
std::vector<std::string> random_order(std::span<const EvalSample> samples, std::uint64_t seed);

/// (ms_m - ms_ini) / (ms_ora - ms_ini).
double improved_ratio(double ms_m, double ms_ini, double ms_ora);

}  // namespace sicf
