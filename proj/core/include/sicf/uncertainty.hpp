#pragma once

#include <string>
#include <string_view>

#include "sicf/scores.hpp"

namespace sicf {

enum class PhiMethod { kMean, kBnn, kMeanBnn };
enum class BnnKind { kPredictive, kAleatoric, kEpistemic };

/// How a quality matrix collapses to a scalar. `bnn_kind` is ignored for kMean.
struct PhiConfig {
  PhiMethod method = PhiMethod::kMean;
  BnnKind bnn_kind = BnnKind::kPredictive;

  friend bool operator==(const PhiConfig&, const PhiConfig&) = default;
};

std::string_view to_string(PhiMethod m);   // "mean" | "bnn" | "m_bnn"
std::string_view to_string(BnnKind k);     // "predictive" | "aleatoric" | "epistemic"
PhiMethod parse_phi_method(std::string_view s);
BnnKind parse_bnn_kind(std::string_view s);

/// Binary entropy in nats with 0 ln 0 = 0.
double binary_entropy(double p);

double phi_mean(const QualityMatrix& m);

/// (v - min) / (max - min) over the whole matrix; a constant matrix maps to
/// all zeros.
QualityMatrix minmax_normalize(const QualityMatrix& m);

// The BNN functions treat each column as one binary label whose k rows are
// ensemble members [v, 1 - v]. Entries must lie in [0, 1]. Sums run over
// columns.

/// Sum over columns of the entropy of the column-mean distribution.
double bnn_predictive(const QualityMatrix& normalized);
/// Sum over columns of the mean per-row entropy.
double bnn_aleatoric(const QualityMatrix& normalized);
/// predictive - aleatoric (mutual information), clamped at 0 for rounding.
double bnn_epistemic(const QualityMatrix& normalized);

double bnn(const QualityMatrix& normalized, BnnKind kind);

/// mean(normalized) * bnn_kind(normalized).
double phi_m_bnn(const QualityMatrix& m, BnnKind kind = BnnKind::kPredictive);

double apply_phi(const QualityMatrix& m, const PhiConfig& config);

}  // namespace sicf
