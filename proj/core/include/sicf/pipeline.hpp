#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sicf/corpus.hpp"
#include "sicf/elimination.hpp"
#include "sicf/fusion.hpp"
#include "sicf/jsonl.hpp"
#include "sicf/providers.hpp"
#include "sicf/scores.hpp"
#include "sicf/uncertainty.hpp"

namespace sicf {

inline constexpr const char* kEngineVersion = "0.3.0";

struct ScoringConfig {
  PhiConfig phi;
  PenaltyConfig penalty;
};

struct DialogueScore {
  ScoreBundle bundle;
  std::optional<QualityMatrix> coverage;  // nullopt for noun-less dialogues
  QualityMatrix faithfulness;
};

/// Per-turn tags of a dialogue, in turn order.
std::vector<std::vector<TaggedToken>> tag_dialogue(const Dialogue& dialogue,
                                                   const Tagger& tagger);

/// Aggregates tagged nouns into lowercased types in first-occurrence order.
/// A type is proper if any of its occurrences is tagged PROPER_NOUN.
std::vector<NounType> collect_noun_types(
    const std::vector<std::vector<TaggedToken>>& tagged_units);

/// Nouns in one sentence; each distinct proper noun counts at most once.
std::size_t sentence_noun_weight(const std::vector<TaggedToken>& tokens);

CoverageInputs build_coverage_inputs(const Dialogue& dialogue, const SummarySet& set,
                                     const Providers& providers);
FaithfulnessInputs build_faithfulness_inputs(const Dialogue& dialogue, const SummarySet& set,
                                             const Providers& providers);
std::vector<EmbeddingVector> candidate_embeddings(const SummarySet& set,
                                                  const Embedder& embedder);

DialogueScore score_dialogue(const Dialogue& dialogue, const SummarySet& set,
                             const Providers& providers, const ScoringConfig& config);

/// Scores every candidate set against its dialogue with `threads` workers.
/// Results are sorted by dialogue id regardless of thread count.
std::vector<DialogueScore> score_corpus(const CorpusSplit& corpus,
                                        std::span<const SummarySet> sets,
                                        const Providers& providers,
                                        const ScoringConfig& config, unsigned threads = 1);

// Serialization of the file-composed artifacts.

OrderedJson to_json(const ScoreBundle& bundle);
ScoreBundle score_bundle_from_json(const JsonlRecord& rec);

OrderedJson to_json(const RankRow& row);
RankRow rank_row_from_json(const JsonlRecord& rec);

OrderedJson matrix_to_json(const std::string& dialogue_id, const QualityMatrix& m);
OrderedJson to_json(const ElimCurve& curve);

std::vector<ScoreBundle> load_scores(const std::filesystem::path& path);
RankTable load_ranks(const std::filesystem::path& path, const FusionWeights& weights);

}  // namespace sicf
