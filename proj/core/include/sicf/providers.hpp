#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sicf/jsonl.hpp"

namespace sicf {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

enum class PosTag { kNoun, kProperNoun, kOther };

std::string_view to_string(PosTag tag);
PosTag parse_pos_tag(std::string_view s);  // throws ArgumentError

struct TaggedToken {
  std::string surface;
  PosTag tag = PosTag::kOther;
  std::size_t position = 0;

  bool is_noun() const { return tag != PosTag::kOther; }
  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

struct NliJudgment {
  double positive = 0.0;
  double negative = 0.0;

  /// negative - positive; smaller means more faithful.
  double score() const { return negative - positive; }
};

// ---------------------------------------------------------------------------
// Lookup keys. File-backed providers resolve by key; synthetic ones by text.

enum class EmbeddingRole { kDialogueNoun, kSummaryNoun, kCandidateText };

std::string_view to_string(EmbeddingRole role);
EmbeddingRole parse_embedding_role(std::string_view s);

/// index layout per role:
///   candidate_text: [cand_idx]
///   dialogue_noun:  [noun_type_idx]
///   summary_noun:   [cand_idx, noun_type_idx]
/// Noun types are numbered by first occurrence in the tagged text.
struct EmbeddingKey {
  std::string dialogue_id;
  EmbeddingRole role = EmbeddingRole::kCandidateText;
  std::vector<std::size_t> index;

  std::string str() const;
};

enum class TagScope { kDialogue, kCandidate };

std::string_view to_string(TagScope scope);

/// Dialogue-scope tags are per turn (`unit` = turn index); candidate-scope
/// tags cover the whole candidate (`unit` = cand_idx).
struct TagKey {
  std::string dialogue_id;
  TagScope scope = TagScope::kDialogue;
  std::size_t unit = 0;

  std::string str() const;
};

struct NliKey {
  std::string dialogue_id;
  std::size_t cand_idx = 0;
  std::size_t premise_idx = 0;
  std::size_t hypothesis_idx = 0;

  std::string str() const;
};

// ---------------------------------------------------------------------------
// Provider interfaces. Implementations are immutable after construction and
// safe to call concurrently.

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(const EmbeddingKey& key, std::string_view text) const = 0;
  virtual std::size_t dim() const = 0;
  virtual Json metadata() const = 0;
};

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<TaggedToken> tag(const TagKey& key, std::string_view text) const = 0;
  virtual Json metadata() const = 0;
};

class NliModel {
 public:
  virtual ~NliModel() = default;
  virtual NliJudgment judge(const NliKey& key, std::string_view premise,
                            std::string_view hypothesis) const = 0;
  virtual Json metadata() const = 0;
};

// ---------------------------------------------------------------------------
// Synthetic providers.

/// Hashes the lowercased text into `dim` reals in [-1, 1) and L2-normalizes.
class SyntheticEmbedder final : public Embedder {
 public:
  explicit SyntheticEmbedder(std::size_t dim = 16, std::uint64_t seed = 0);

  EmbeddingVector embed(const EmbeddingKey& key, std::string_view text) const override;
  EmbeddingVector embed_text(std::string_view text) const;
  std::size_t dim() const override { return dim_; }
  Json metadata() const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

/// Capitalized tokens are proper nouns; tokens in the lexicon are nouns.
class SyntheticTagger final : public Tagger {
 public:
  SyntheticTagger();
  explicit SyntheticTagger(std::set<std::string> lexicon);

  std::vector<TaggedToken> tag(const TagKey& key, std::string_view text) const override;
  std::vector<TaggedToken> tag_text(std::string_view text) const;
  Json metadata() const override;

  static const std::set<std::string>& default_lexicon();

 private:
  std::set<std::string> lexicon_;
};

/// positive = fraction of distinct hypothesis tokens present in the premise;
/// negative = 1 - positive.
class SyntheticNli final : public NliModel {
 public:
  NliJudgment judge(const NliKey& key, std::string_view premise,
                    std::string_view hypothesis) const override;
  NliJudgment judge_text(std::string_view premise, std::string_view hypothesis) const;
  Json metadata() const override;
};

// ---------------------------------------------------------------------------
// File-backed providers reading model exports.

class FileEmbedder final : public Embedder {
 public:
  explicit FileEmbedder(const std::filesystem::path& path);

  EmbeddingVector embed(const EmbeddingKey& key, std::string_view text) const override;
  std::size_t dim() const override { return dim_; }
  std::size_t size() const { return store_.size(); }
  Json metadata() const override;

 private:
  std::string source_;
  std::size_t dim_ = 0;
  std::unordered_map<std::string, EmbeddingVector> store_;
};

class FileTagger final : public Tagger {
 public:
  explicit FileTagger(const std::filesystem::path& path);

  std::vector<TaggedToken> tag(const TagKey& key, std::string_view text) const override;
  std::size_t size() const { return store_.size(); }
  Json metadata() const override;

 private:
  std::string source_;
  std::unordered_map<std::string, std::vector<TaggedToken>> store_;
};

class FileNli final : public NliModel {
 public:
  explicit FileNli(const std::filesystem::path& path);

  NliJudgment judge(const NliKey& key, std::string_view premise,
                    std::string_view hypothesis) const override;
  std::size_t size() const { return store_.size(); }
  Json metadata() const override;

 private:
  std::string source_;
  std::unordered_map<std::string, NliJudgment> store_;
};

struct Providers {
  std::shared_ptr<const Embedder> embedder;
  std::shared_ptr<const Tagger> tagger;
  std::shared_ptr<const NliModel> nli;

  static Providers synthetic(std::uint64_t seed = 0);
  static Providers from_files(const std::filesystem::path& embeddings,
                              const std::filesystem::path& tags,
                              const std::filesystem::path& nli);
  Json metadata() const;
};

}  // namespace sicf
