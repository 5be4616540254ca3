#include "sicf/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "sicf/errors.hpp"

namespace sicf {
namespace {

void require_non_empty(const QualityMatrix& m) {
  if (m.empty()) throw ArgumentError("quality matrix is empty");
}

void require_unit_entries(const QualityMatrix& m) {
  require_non_empty(m);
  for (double v : m.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ArgumentError("BNN input entries must lie in [0, 1]; got " + std::to_string(v));
    }
  }
}

double column_mean(const QualityMatrix& m, std::size_t c) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, c);
  return s / static_cast<double>(m.rows());
}

}  // namespace

std::string_view to_string(PhiMethod m) {
  switch (m) {
    case PhiMethod::kMean: return "mean";
    case PhiMethod::kBnn: return "bnn";
    case PhiMethod::kMeanBnn: return "m_bnn";
  }
  return "mean";
}

std::string_view to_string(BnnKind k) {
  switch (k) {
    case BnnKind::kPredictive: return "predictive";
    case BnnKind::kAleatoric: return "aleatoric";
    case BnnKind::kEpistemic: return "epistemic";
  }
  return "predictive";
}

PhiMethod parse_phi_method(std::string_view s) {
  if (s == "mean") return PhiMethod::kMean;
  if (s == "bnn") return PhiMethod::kBnn;
  if (s == "m_bnn") return PhiMethod::kMeanBnn;
  throw ArgumentError("phi must be one of mean|bnn|m_bnn, got \"" + std::string(s) + "\"");
}

BnnKind parse_bnn_kind(std::string_view s) {
  if (s == "predictive") return BnnKind::kPredictive;
  if (s == "aleatoric") return BnnKind::kAleatoric;
  if (s == "epistemic") return BnnKind::kEpistemic;
  throw ArgumentError("bnn_kind must be one of predictive|aleatoric|epistemic, got \"" +
                      std::string(s) + "\"");
}

double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

double phi_mean(const QualityMatrix& m) {
  require_non_empty(m);
  double s = 0.0;
  for (double v : m.values()) s += v;
  return s / static_cast<double>(m.values().size());
}

QualityMatrix minmax_normalize(const QualityMatrix& m) {
  QualityMatrix out = m;
  if (m.empty()) return out;
  auto [lo_it, hi_it] = std::minmax_element(m.values().begin(), m.values().end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  for (double& v : out.values()) v = range > 0.0 ? (v - lo) / range : 0.0;
  return out;
}

double bnn_predictive(const QualityMatrix& normalized) {
  require_unit_entries(normalized);
  double total = 0.0;
  for (std::size_t c = 0; c < normalized.cols(); ++c) {
    total += binary_entropy(column_mean(normalized, c));
  }
  return total;
}

double bnn_aleatoric(const QualityMatrix& normalized) {
  require_unit_entries(normalized);
  double total = 0.0;
  for (std::size_t c = 0; c < normalized.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < normalized.rows(); ++r) s += binary_entropy(normalized(r, c));
    total += s / static_cast<double>(normalized.rows());
  }
  return total;
}

double bnn_epistemic(const QualityMatrix& normalized) {
  return std::max(0.0, bnn_predictive(normalized) - bnn_aleatoric(normalized));
}

double bnn(const QualityMatrix& normalized, BnnKind kind) {
  switch (kind) {
    case BnnKind::kPredictive: return bnn_predictive(normalized);
    case BnnKind::kAleatoric: return bnn_aleatoric(normalized);
    case BnnKind::kEpistemic: return bnn_epistemic(normalized);
  }
  return bnn_predictive(normalized);
}

double phi_m_bnn(const QualityMatrix& m, BnnKind kind) {
  require_non_empty(m);
  const auto normalized = minmax_normalize(m);
  return phi_mean(normalized) * bnn(normalized, kind);
}

double apply_phi(const QualityMatrix& m, const PhiConfig& config) {
  switch (config.method) {
    case PhiMethod::kMean: return phi_mean(m);
    case PhiMethod::kBnn:
      require_non_empty(m);
      return bnn(minmax_normalize(m), config.bnn_kind);
    case PhiMethod::kMeanBnn: return phi_m_bnn(m, config.bnn_kind);
  }
  return phi_mean(m);
}

}  // namespace sicf
