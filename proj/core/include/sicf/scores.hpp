#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sicf/providers.hpp"

namespace sicf {

enum class MatrixKind { kCoverage, kFaithfulness };

std::string_view to_string(MatrixKind kind);

/// Dense row-major k x L matrix; one row per candidate summary.
class QualityMatrix {
 public:
  QualityMatrix() = default;
  QualityMatrix(std::size_t rows, std::size_t cols, MatrixKind kind, double fill = 0.0);
  QualityMatrix(std::vector<std::vector<double>> rows, MatrixKind kind);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return values_.empty(); }
  MatrixKind kind() const { return kind_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
  }

  /// Copy with rows reordered so that new row i is old row perm[i].
  QualityMatrix permute_rows(std::span<const std::size_t> perm) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  MatrixKind kind_ = MatrixKind::kCoverage;
  std::vector<double> values_;
};

/// Mean over dimensions of the population variance across the k vectors.
/// Lower means the candidates agree semantically.
double semantic_invariance(std::span<const EmbeddingVector> embeddings);

/// Index of the candidate closest (Euclidean) to the mean embedding; ties go
/// to the lowest index.
std::size_t representative_summary(std::span<const EmbeddingVector> embeddings);

/// One dialogue noun type (lowercased surface form).
struct NounType {
  std::string surface;
  bool is_proper = false;
  std::size_t occurrences = 1;
  EmbeddingVector embedding;

  /// Occurrence weight; proper-noun types are capped at 1.
  double weight() const;
};

struct CoverageInputs {
  std::vector<NounType> dialogue_nouns;                      // p types
  std::vector<std::vector<EmbeddingVector>> candidate_nouns;  // k lists of q_i
};

struct DialogueSentence {
  std::string text;
  std::size_t noun_weight = 0;  // nouns in the sentence, proper-noun types capped at 1
};

struct FaithfulnessInputs {
  std::string dialogue_id;
  std::vector<DialogueSentence> dialogue_sentences;        // h sentences
  std::vector<std::vector<std::string>> candidate_sentences;  // k lists of z_i
};

struct PenaltyConfig {
  double coverage = 2.0;
  /// Defaults to the largest sentence weight (at least 1).
  std::optional<double> faithfulness;
};

/// Weighted coverage matrix (k x p). Returns nullopt when the dialogue has no
/// nouns (p = 0). A candidate with no nouns gets a row of `penalty`.
std::optional<QualityMatrix> coverage_matrix(const CoverageInputs& inputs,
                                             double penalty = 2.0);

/// Penalty used by faithfulness_matrix for the given sentences.
double faithfulness_penalty(std::span<const DialogueSentence> sentences,
                            const PenaltyConfig& config = {});

/// Weighted faithfulness matrix (k x h). Cells of zero-weight sentences and
/// rows of candidates without sentences hold the penalty value.
QualityMatrix faithfulness_matrix(const FaithfulnessInputs& inputs, const NliModel& nli,
                                  const PenaltyConfig& config = {});

double euclidean_distance(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace sicf
