#include "sicf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sicf/errors.hpp"
#include "sicf/text.hpp"

namespace sicf {
namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts count_ngrams(Tokens tokens, std::size_t n) {
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

double f1(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace

std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::kRouge1: return "rouge1";
    case MetricKind::kRouge2: return "rouge2";
    case MetricKind::kRougeL: return "rougeL";
    case MetricKind::kEmbF: return "emb_f";
  }
  return "rouge1";
}

MetricKind parse_metric(std::string_view s) {
  for (auto m : all_metrics())
    if (to_string(m) == s) return m;
  throw ArgumentError("unknown metric \"" + std::string(s) + "\"");
}

const std::vector<MetricKind>& all_metrics() {
  static const std::vector<MetricKind> metrics = {MetricKind::kRouge1, MetricKind::kRouge2,
                                                  MetricKind::kRougeL, MetricKind::kEmbF};
  return metrics;
}

double rouge_n(Tokens candidate, Tokens reference, int n) {
  if (n != 1 && n != 2) throw ArgumentError("rouge_n supports n = 1 or 2");
  if (candidate.empty() && reference.empty()) return 1.0;
  const auto un = static_cast<std::size_t>(n);
  const auto cand = count_ngrams(candidate, un);
  const auto ref = count_ngrams(reference, un);
  if (cand.empty() && ref.empty()) {
    return std::equal(candidate.begin(), candidate.end(), reference.begin(), reference.end())
               ? 1.0
               : 0.0;
  }
  std::size_t overlap = 0, cand_total = 0, ref_total = 0;
  for (const auto& [g, c] : cand) {
    cand_total += c;
    auto it = ref.find(g);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  for (const auto& [g, c] : ref) ref_total += c;
  if (overlap == 0) return 0.0;
  return f1(static_cast<double>(overlap) / static_cast<double>(cand_total),
            static_cast<double>(overlap) / static_cast<double>(ref_total));
}

std::size_t lcs_length(Tokens a, Tokens b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(Tokens candidate, Tokens reference) {
  if (candidate.empty() && reference.empty()) return 1.0;
  if (candidate.empty() || reference.empty()) return 0.0;
  const double lcs = static_cast<double>(lcs_length(candidate, reference));
  return f1(lcs / static_cast<double>(candidate.size()), lcs / static_cast<double>(reference.size()));
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("embedding dim mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t d = 0; d < a.dim(); ++d) {
    dot += a.values[d] * b.values[d];
    na += a.values[d] * a.values[d];
    nb += b.values[d] * b.values[d];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double emb_f(std::span<const EmbeddingVector> candidate,
             std::span<const EmbeddingVector> reference) {
  if (candidate.empty() || reference.empty()) {
    throw ArgumentError("emb_f needs non-empty candidate and reference");
  }
  auto greedy = [](std::span<const EmbeddingVector> from, std::span<const EmbeddingVector> to) {
    double total = 0.0;
    for (const auto& x : from) {
      double best = 0.0;
      for (const auto& y : to) best = std::max(best, cosine_similarity(x, y));
      total += best;
    }
    return total / static_cast<double>(from.size());
  };
  const double recall = greedy(reference, candidate);
  const double precision = greedy(candidate, reference);
  return f1(precision, recall);
}

double emb_f(Tokens candidate, Tokens reference, const SyntheticEmbedder& embedder) {
  auto embed_all = [&](Tokens toks) {
    std::vector<EmbeddingVector> out;
    out.reserve(toks.size());
    for (const auto& t : toks) out.push_back(embedder.embed_text(t));
    return out;
  };
  return emb_f(embed_all(candidate), embed_all(reference));
}

MetricScorer::MetricScorer(std::shared_ptr<const SyntheticEmbedder> embedder)
    : embedder_(std::move(embedder)) {}

double MetricScorer::score(MetricKind metric, std::string_view prediction,
                           std::string_view reference) const {
  const auto cand = tokenize(prediction);
  const auto ref = tokenize(reference);
  switch (metric) {
    case MetricKind::kRouge1: return rouge_n(cand, ref, 1);
    case MetricKind::kRouge2: return rouge_n(cand, ref, 2);
    case MetricKind::kRougeL: return rouge_l(cand, ref);
    case MetricKind::kEmbF:
      if (cand.empty() || ref.empty()) return cand.empty() && ref.empty() ? 1.0 : 0.0;
      return emb_f(cand, ref, *embedder_);
  }
  return 0.0;
}

}  // namespace sicf
