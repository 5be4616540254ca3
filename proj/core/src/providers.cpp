#include "sicf/providers.hpp"

#include <cctype>
#include <cmath>
#include <unordered_set>

#include "sicf/errors.hpp"
#include "sicf/text.hpp"

namespace sicf {
namespace {

void require_text(std::string_view text, const char* what) {
  if (is_blank(text)) throw ArgumentError(std::string(what) + " must be non-empty");
}

std::string index_str(const std::vector<std::size_t>& index) {
  std::string out;
  for (auto i : index) {
    out += '/';
    out += std::to_string(i);
  }
  return out;
}

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kProperNoun: return "PROPER_NOUN";
    case PosTag::kOther: return "OTHER";
  }
  return "OTHER";
}

PosTag parse_pos_tag(std::string_view s) {
  if (s == "NOUN") return PosTag::kNoun;
  if (s == "PROPER_NOUN") return PosTag::kProperNoun;
  if (s == "OTHER") return PosTag::kOther;
  throw ArgumentError("unknown tag \"" + std::string(s) + "\"");
}

std::string_view to_string(EmbeddingRole role) {
  switch (role) {
    case EmbeddingRole::kDialogueNoun: return "dialogue_noun";
    case EmbeddingRole::kSummaryNoun: return "summary_noun";
    case EmbeddingRole::kCandidateText: return "candidate_text";
  }
  return "candidate_text";
}

EmbeddingRole parse_embedding_role(std::string_view s) {
  if (s == "dialogue_noun") return EmbeddingRole::kDialogueNoun;
  if (s == "summary_noun") return EmbeddingRole::kSummaryNoun;
  if (s == "candidate_text") return EmbeddingRole::kCandidateText;
  throw ArgumentError("unknown embedding role \"" + std::string(s) + "\"");
}

std::string_view to_string(TagScope scope) {
  return scope == TagScope::kDialogue ? "dialogue" : "candidate";
}

std::string EmbeddingKey::str() const {
  return dialogue_id + "/" + std::string(to_string(role)) + index_str(index);
}

std::string TagKey::str() const {
  return dialogue_id + "/" + std::string(to_string(scope)) + "/" + std::to_string(unit);
}

std::string NliKey::str() const {
  return dialogue_id + "/" + std::to_string(cand_idx) + "/" + std::to_string(premise_idx) +
         "/" + std::to_string(hypothesis_idx);
}

// --- SyntheticEmbedder -------------------------------------------------------

SyntheticEmbedder::SyntheticEmbedder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim == 0) throw ArgumentError("embedding dim must be positive");
}

EmbeddingVector SyntheticEmbedder::embed(const EmbeddingKey&, std::string_view text) const {
  return embed_text(text);
}

EmbeddingVector SyntheticEmbedder::embed_text(std::string_view text) const {
  require_text(text, "text");
  std::uint64_t state = fnv1a64(to_lower(trim(text))) ^ (seed_ * 0x9e3779b97f4a7c15ULL);
  EmbeddingVector v;
  v.values.resize(dim_);
  double norm2 = 0.0;
  for (auto& x : v.values) {
    // 53 random mantissa bits mapped to [-1, 1).
    x = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
    norm2 += x * x;
  }
  if (norm2 == 0.0) {
    v.values[0] = 1.0;
    return v;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : v.values) x *= inv;
  return v;
}

Json SyntheticEmbedder::metadata() const {
  return {{"kind", "synthetic"}, {"dim", dim_}, {"seed", seed_}, {"pooling", "none"}};
}

// --- SyntheticTagger ---------------------------------------------------------

const std::set<std::string>& SyntheticTagger::default_lexicon() {
  static const std::set<std::string> lexicon = {
      "airport", "apartment", "bag",     "bank",     "birthday", "book",    "bus",
      "cake",    "car",       "cat",     "class",    "coffee",   "computer", "concert",
      "dinner",  "doctor",    "dog",     "dress",    "exam",     "flight",  "flowers",
      "food",    "game",      "gift",    "gym",      "hotel",    "house",   "job",
      "keys",    "laptop",    "lunch",   "meeting",  "money",    "movie",   "office",
      "park",    "party",     "phone",   "pizza",    "present",  "project", "report",
      "restaurant", "room",   "school",  "shoes",    "shop",     "station", "table",
      "taxi",    "teacher",   "ticket",  "tickets",  "train",    "trip",    "vacation",
      "weekend", "work",      "homework", "message", "photos",   "beach",   "museum",
  };
  return lexicon;
}

SyntheticTagger::SyntheticTagger() : lexicon_(default_lexicon()) {}

SyntheticTagger::SyntheticTagger(std::set<std::string> lexicon) : lexicon_(std::move(lexicon)) {}

std::vector<TaggedToken> SyntheticTagger::tag(const TagKey&, std::string_view text) const {
  return tag_text(text);
}

std::vector<TaggedToken> SyntheticTagger::tag_text(std::string_view text) const {
  require_text(text, "text");
  std::vector<TaggedToken> out;
  auto pieces = word_pieces(text);
  out.reserve(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    auto& surface = pieces[i];
    PosTag tag = PosTag::kOther;
    if (std::isupper(static_cast<unsigned char>(surface.front()))) {
      tag = PosTag::kProperNoun;
    } else if (lexicon_.count(to_lower(surface))) {
      tag = PosTag::kNoun;
    }
    out.push_back({std::move(surface), tag, i});
  }
  return out;
}

Json SyntheticTagger::metadata() const {
  return {{"kind", "synthetic"}, {"lexicon_size", lexicon_.size()}};
}

// --- SyntheticNli ------------------------------------------------------------

NliJudgment SyntheticNli::judge(const NliKey&, std::string_view premise,
                                std::string_view hypothesis) const {
  return judge_text(premise, hypothesis);
}

NliJudgment SyntheticNli::judge_text(std::string_view premise,
                                     std::string_view hypothesis) const {
  require_text(premise, "premise");
  require_text(hypothesis, "hypothesis");
  auto p = tokenize(premise);
  auto h = tokenize(hypothesis);
  std::unordered_set<std::string> premise_types(p.begin(), p.end());
  std::set<std::string> hyp_types(h.begin(), h.end());
  if (hyp_types.empty()) return {0.0, 1.0};
  std::size_t hits = 0;
  for (const auto& t : hyp_types) hits += premise_types.count(t);
  const double pos = static_cast<double>(hits) / static_cast<double>(hyp_types.size());
  return {pos, 1.0 - pos};
}

Json SyntheticNli::metadata() const {
  return {{"kind", "synthetic"}, {"rule", "hypothesis-token overlap"}};
}

// --- FileEmbedder ------------------------------------------------------------

FileEmbedder::FileEmbedder(const std::filesystem::path& path) : source_(path.string()) {
  for (const auto& rec : read_jsonl(path)) {
    EmbeddingKey key;
    key.dialogue_id = require_string(rec, "id");
    try {
      key.role = parse_embedding_role(require_string(rec, "role"));
    } catch (const ArgumentError& e) {
      throw SchemaError(rec.line, e.what());
    }
    const auto& idx = require_field(rec, "index");
    if (!idx.is_array()) throw SchemaError(rec.line, "field \"index\" must be an array");
    for (const auto& i : idx) {
      if (!i.is_number_integer() || i.get<long long>() < 0) {
        throw SchemaError(rec.line, "field \"index\" must hold non-negative integers");
      }
      key.index.push_back(i.get<std::size_t>());
    }
    const auto& vec = require_field(rec, "vector");
    if (!vec.is_array() || vec.empty()) {
      throw SchemaError(rec.line, "field \"vector\" must be a non-empty array");
    }
    EmbeddingVector v;
    for (const auto& x : vec) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        throw SchemaError(rec.line, "field \"vector\" must hold finite numbers");
      }
      v.values.push_back(x.get<double>());
    }
    if (dim_ == 0) dim_ = v.dim();
    if (v.dim() != dim_) {
      throw SchemaError(rec.line, "vector dim " + std::to_string(v.dim()) +
                                      " differs from " + std::to_string(dim_));
    }
    if (!store_.emplace(key.str(), std::move(v)).second) {
      throw ValidationError("duplicate embedding key " + key.str());
    }
  }
}

EmbeddingVector FileEmbedder::embed(const EmbeddingKey& key, std::string_view text) const {
  require_text(text, "text");
  auto it = store_.find(key.str());
  if (it == store_.end()) throw LookupError(key.str());
  return it->second;
}

Json FileEmbedder::metadata() const {
  return {{"kind", "file"}, {"source", source_}, {"dim", dim_}, {"records", store_.size()}};
}

// --- FileTagger --------------------------------------------------------------

FileTagger::FileTagger(const std::filesystem::path& path) : source_(path.string()) {
  for (const auto& rec : read_jsonl(path)) {
    TagKey key;
    key.dialogue_id = require_string(rec, "id");
    const auto scope = require_string(rec, "scope");
    if (scope == "dialogue") {
      key.scope = TagScope::kDialogue;
      key.unit = require_index(rec, "turn_idx");
    } else if (scope == "candidate") {
      key.scope = TagScope::kCandidate;
      key.unit = require_index(rec, "cand_idx");
    } else {
      throw SchemaError(rec.line, "field \"scope\" must be dialogue or candidate");
    }
    const auto& toks = require_field(rec, "tokens");
    if (!toks.is_array()) throw SchemaError(rec.line, "field \"tokens\" must be an array");
    std::vector<TaggedToken> tokens;
    for (const auto& t : toks) {
      if (!t.is_object() || !t.contains("surface") || !t.contains("tag") ||
          !t.contains("position") || !t["surface"].is_string() || !t["tag"].is_string() ||
          !t["position"].is_number_integer() || t["position"].get<long long>() < 0) {
        throw SchemaError(rec.line, "token must be {\"surface\",\"tag\",\"position\"}");
      }
      TaggedToken tok;
      tok.surface = t["surface"].get<std::string>();
      try {
        tok.tag = parse_pos_tag(t["tag"].get<std::string>());
      } catch (const ArgumentError& e) {
        throw SchemaError(rec.line, e.what());
      }
      tok.position = t["position"].get<std::size_t>();
      if (!tokens.empty() && tok.position <= tokens.back().position) {
        throw SchemaError(rec.line, "token positions must be strictly increasing");
      }
      tokens.push_back(std::move(tok));
    }
    if (!store_.emplace(key.str(), std::move(tokens)).second) {
      throw ValidationError("duplicate tag key " + key.str());
    }
  }
}

std::vector<TaggedToken> FileTagger::tag(const TagKey& key, std::string_view text) const {
  require_text(text, "text");
  auto it = store_.find(key.str());
  if (it == store_.end()) throw LookupError(key.str());
  return it->second;
}

Json FileTagger::metadata() const {
  return {{"kind", "file"}, {"source", source_}, {"records", store_.size()}};
}

// --- FileNli -----------------------------------------------------------------

FileNli::FileNli(const std::filesystem::path& path) : source_(path.string()) {
  for (const auto& rec : read_jsonl(path)) {
    NliKey key;
    key.dialogue_id = require_string(rec, "id");
    key.cand_idx = require_index(rec, "cand_idx");
    key.premise_idx = require_index(rec, "premise_idx");
    key.hypothesis_idx = require_index(rec, "hypothesis_idx");
    NliJudgment j{require_number(rec, "positive"), require_number(rec, "negative")};
    if (!is_probability(j.positive) || !is_probability(j.negative)) {
      throw SchemaError(rec.line, "positive/negative must be probabilities in [0, 1]");
    }
    if (!store_.emplace(key.str(), j).second) {
      throw ValidationError("duplicate NLI key " + key.str());
    }
  }
}

NliJudgment FileNli::judge(const NliKey& key, std::string_view premise,
                           std::string_view hypothesis) const {
  require_text(premise, "premise");
  require_text(hypothesis, "hypothesis");
  auto it = store_.find(key.str());
  if (it == store_.end()) throw LookupError(key.str());
  return it->second;
}

Json FileNli::metadata() const {
  return {{"kind", "file"}, {"source", source_}, {"records", store_.size()}};
}

// --- Providers ---------------------------------------------------------------

Providers Providers::synthetic(std::uint64_t seed) {
  return {std::make_shared<SyntheticEmbedder>(16, seed), std::make_shared<SyntheticTagger>(),
          std::make_shared<SyntheticNli>()};
}

Providers Providers::from_files(const std::filesystem::path& embeddings,
                                const std::filesystem::path& tags,
                                const std::filesystem::path& nli) {
  return {std::make_shared<FileEmbedder>(embeddings), std::make_shared<FileTagger>(tags),
          std::make_shared<FileNli>(nli)};
}

Json Providers::metadata() const {
  return {{"embedder", embedder->metadata()},
          {"tagger", tagger->metadata()},
          {"nli", nli->metadata()}};
}

}  // namespace sicf
