#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sicf/providers.hpp"

namespace sicf {

enum class MetricKind { kRouge1, kRouge2, kRougeL, kEmbF };

std::string_view to_string(MetricKind m);  // "rouge1" | "rouge2" | "rougeL" | "emb_f"
MetricKind parse_metric(std::string_view s);
const std::vector<MetricKind>& all_metrics();

using Tokens = std::span<const std::string>;

/// ROUGE-N F1 with clipped n-gram counts, n in {1, 2}. Both token lists
/// empty gives 1. When neither side has an n-gram the score is 1 if the
/// token lists are equal and 0 otherwise.
double rouge_n(Tokens candidate, Tokens reference, int n);

/// LCS-based ROUGE-L F1. Both empty gives 1.
double rouge_l(Tokens candidate, Tokens reference);

std::size_t lcs_length(Tokens a, Tokens b);

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// Greedy-matching embedding F: recall averages, over reference tokens, the
/// best cosine similarity to any candidate token (negative similarity counts
/// as 0); precision is symmetric. Both sides must be non-empty.
double emb_f(std::span<const EmbeddingVector> candidate,
             std::span<const EmbeddingVector> reference);
double emb_f(Tokens candidate, Tokens reference, const SyntheticEmbedder& embedder);

/// Per-sample metric on raw text (tokenized with sicf::tokenize).
class MetricScorer {
 public:
  explicit MetricScorer(std::shared_ptr<const SyntheticEmbedder> embedder =
                            std::make_shared<SyntheticEmbedder>());

  double score(MetricKind metric, std::string_view prediction, std::string_view reference) const;

 private:
  std::shared_ptr<const SyntheticEmbedder> embedder_;
};

}  // namespace sicf
