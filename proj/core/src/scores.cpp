#include "sicf/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sicf/errors.hpp"

namespace sicf {
namespace {

std::size_t common_dim(std::span<const EmbeddingVector> embeddings) {
  if (embeddings.empty()) throw ArgumentError("need at least one embedding");
  const std::size_t dim = embeddings.front().dim();
  if (dim == 0) throw ArgumentError("embeddings must have positive dim");
  for (const auto& e : embeddings) {
    if (e.dim() != dim) {
      throw ArgumentError("embedding dim mismatch: " + std::to_string(e.dim()) + " vs " +
                          std::to_string(dim));
    }
  }
  return dim;
}

std::vector<double> mean_vector(std::span<const EmbeddingVector> embeddings, std::size_t dim) {
  std::vector<double> mean(dim, 0.0);
  for (const auto& e : embeddings)
    for (std::size_t d = 0; d < dim; ++d) mean[d] += e.values[d];
  for (auto& m : mean) m /= static_cast<double>(embeddings.size());
  return mean;
}

}  // namespace

std::string_view to_string(MatrixKind kind) {
  return kind == MatrixKind::kCoverage ? "coverage" : "faithfulness";
}

QualityMatrix::QualityMatrix(std::size_t rows, std::size_t cols, MatrixKind kind, double fill)
    : rows_(rows), cols_(cols), kind_(kind), values_(rows * cols, fill) {}

QualityMatrix::QualityMatrix(std::vector<std::vector<double>> rows, MatrixKind kind)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()), kind_(kind) {
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ArgumentError("ragged matrix rows");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

QualityMatrix QualityMatrix::permute_rows(std::span<const std::size_t> perm) const {
  if (perm.size() != rows_) throw ArgumentError("permutation size mismatch");
  QualityMatrix out(rows_, cols_, kind_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto src = row(perm[i]);
    std::copy(src.begin(), src.end(), out.values_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
  }
  return out;
}

double euclidean_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("embedding dim mismatch");
  double s = 0.0;
  for (std::size_t d = 0; d < a.dim(); ++d) {
    const double diff = a.values[d] - b.values[d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

double semantic_invariance(std::span<const EmbeddingVector> embeddings) {
  const std::size_t dim = common_dim(embeddings);
  const auto mean = mean_vector(embeddings, dim);
  const double k = static_cast<double>(embeddings.size());
  double total = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double var = 0.0;
    for (const auto& e : embeddings) {
      const double diff = e.values[d] - mean[d];
      var += diff * diff;
    }
    total += var / k;
  }
  return total / static_cast<double>(dim);
}

std::size_t representative_summary(std::span<const EmbeddingVector> embeddings) {
  const std::size_t dim = common_dim(embeddings);
  EmbeddingVector mean{mean_vector(embeddings, dim)};
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const double d = euclidean_distance(embeddings[i], mean);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

double NounType::weight() const {
  return is_proper ? std::min<double>(static_cast<double>(occurrences), 1.0)
                   : static_cast<double>(occurrences);
}

std::optional<QualityMatrix> coverage_matrix(const CoverageInputs& inputs, double penalty) {
  const auto& nouns = inputs.dialogue_nouns;
  if (nouns.empty()) return std::nullopt;
  if (inputs.candidate_nouns.empty()) throw ArgumentError("need at least one candidate");

  QualityMatrix m(inputs.candidate_nouns.size(), nouns.size(), MatrixKind::kCoverage);
  for (std::size_t i = 0; i < inputs.candidate_nouns.size(); ++i) {
    const auto& cand = inputs.candidate_nouns[i];
    for (std::size_t j = 0; j < nouns.size(); ++j) {
      if (nouns[j].occurrences == 0) throw ArgumentError("noun occurrence count must be >= 1");
      if (cand.empty()) {
        m(i, j) = penalty;
        continue;
      }
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& t : cand) nearest = std::min(nearest, euclidean_distance(nouns[j].embedding, t));
      m(i, j) = nearest * nouns[j].weight();
    }
  }
  return m;
}

double faithfulness_penalty(std::span<const DialogueSentence> sentences,
                            const PenaltyConfig& config) {
  if (config.faithfulness) return *config.faithfulness;
  std::size_t max_w = 0;
  for (const auto& s : sentences) max_w = std::max(max_w, s.noun_weight);
  return std::max(1.0, static_cast<double>(max_w));
}

QualityMatrix faithfulness_matrix(const FaithfulnessInputs& inputs, const NliModel& nli,
                                  const PenaltyConfig& config) {
  const auto& sents = inputs.dialogue_sentences;
  if (sents.empty()) throw ArgumentError("dialogue must have at least one sentence");
  if (inputs.candidate_sentences.empty()) throw ArgumentError("need at least one candidate");

  const double penalty = faithfulness_penalty(sents, config);
  QualityMatrix m(inputs.candidate_sentences.size(), sents.size(), MatrixKind::kFaithfulness,
                  penalty);
  for (std::size_t i = 0; i < inputs.candidate_sentences.size(); ++i) {
    const auto& summary = inputs.candidate_sentences[i];
    if (summary.empty()) continue;
    for (std::size_t a = 0; a < sents.size(); ++a) {
      // Activation: sentences without nouns keep the penalty.
      if (sents[a].noun_weight == 0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < summary.size(); ++b) {
        const NliKey key{inputs.dialogue_id, i, a, b};
        best = std::min(best, nli.judge(key, sents[a].text, summary[b]).score());
      }
      m(i, a) = best * static_cast<double>(sents[a].noun_weight);
    }
  }
  return m;
}

}  // namespace sicf
