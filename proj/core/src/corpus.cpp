#include "sicf/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "sicf/errors.hpp"
#include "sicf/jsonl.hpp"
#include "sicf/text.hpp"

namespace sicf {
namespace {

Dialogue parse_dialogue(const JsonlRecord& rec) {
  Dialogue d;
  d.id = require_string(rec, "id");
  if (d.id.empty()) throw SchemaError(rec.line, "field \"id\" must be non-empty");
  d.turns = require_string_array(rec, "dialogue");
  if (d.turns.empty()) throw SchemaError(rec.line, "field \"dialogue\" must hold at least one turn");
  for (const auto& t : d.turns) {
    if (is_blank(t)) throw SchemaError(rec.line, "field \"dialogue\" holds a blank turn");
  }
  return d;
}

OrderedJson dialogue_json(const Dialogue& d) {
  OrderedJson j;
  j["id"] = d.id;
  j["dialogue"] = d.turns;
  return j;
}

// Uniform integer in [0, bound) by rejection; stable across standard libraries.
std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = splitmix64(state);
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::string Dialogue::raw_text() const { return join(turns, "\n"); }

const Dialogue* CorpusSplit::find(const std::string& id) const {
  for (const auto& l : labeled)
    if (l.dialogue.id == id) return &l.dialogue;
  for (const auto& u : unlabeled)
    if (u.id == id) return &u;
  return nullptr;
}

const std::string* CorpusSplit::reference(const std::string& id) const {
  for (const auto& l : labeled)
    if (l.dialogue.id == id) return &l.reference;
  return nullptr;
}

CorpusSplit load_corpus(const std::filesystem::path& path, SplitKind schema) {
  auto records = read_jsonl(path);
  if (records.empty()) throw EmptyCorpusError("corpus file has no records: " + path.string());

  CorpusSplit out;
  out.name = path.stem().string();
  std::unordered_set<std::string> seen;
  for (const auto& rec : records) {
    Dialogue d = parse_dialogue(rec);
    if (!seen.insert(d.id).second) {
      throw ValidationError("duplicate dialogue id \"" + d.id + "\" at line " +
                            std::to_string(rec.line));
    }
    const bool has_summary = rec.value.contains("summary");
    if (schema == SplitKind::kLabeled && !has_summary) require_field(rec, "summary");
    if (schema != SplitKind::kUnlabeled && has_summary) {
      out.labeled.push_back({std::move(d), require_string(rec, "summary")});
    } else {
      out.unlabeled.push_back(std::move(d));
    }
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, const CorpusSplit& corpus) {
  std::vector<OrderedJson> lines;
  for (const auto& l : corpus.labeled) {
    auto j = dialogue_json(l.dialogue);
    j["summary"] = l.reference;
    lines.push_back(std::move(j));
  }
  for (const auto& u : corpus.unlabeled) lines.push_back(dialogue_json(u));
  write_jsonl(path, lines);
}

std::vector<SummarySet> load_candidates(const std::filesystem::path& path) {
  auto records = read_jsonl(path);
  if (records.empty()) throw EmptyCorpusError("candidate file has no records: " + path.string());
  std::vector<SummarySet> out;
  std::unordered_set<std::string> seen;
  for (const auto& rec : records) {
    SummarySet s;
    s.dialogue_id = require_string(rec, "id");
    if (s.dialogue_id.empty()) throw SchemaError(rec.line, "field \"id\" must be non-empty");
    s.candidates = require_string_array(rec, "candidates");
    if (s.candidates.empty()) throw SchemaError(rec.line, "field \"candidates\" must be non-empty");
    for (const auto& c : s.candidates) {
      if (is_blank(c)) throw SchemaError(rec.line, "field \"candidates\" holds a blank summary");
    }
    if (!seen.insert(s.dialogue_id).second) {
      throw ValidationError("duplicate candidate-set id \"" + s.dialogue_id + "\" at line " +
                            std::to_string(rec.line));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_candidates(const std::filesystem::path& path,
                      const std::vector<SummarySet>& sets) {
  std::vector<OrderedJson> lines;
  for (const auto& s : sets) {
    OrderedJson j;
    j["id"] = s.dialogue_id;
    j["candidates"] = s.candidates;
    lines.push_back(std::move(j));
  }
  write_jsonl(path, lines);
}

void attach_references(std::vector<SummarySet>& sets, const CorpusSplit& corpus) {
  std::unordered_map<std::string, const std::string*> refs;
  for (const auto& l : corpus.labeled) refs.emplace(l.dialogue.id, &l.reference);
  for (auto& s : sets) {
    auto it = refs.find(s.dialogue_id);
    if (it != refs.end()) s.reference = *it->second;
  }
}

CorpusSplit split_corpus(const CorpusSplit& full, double labeled_ratio,
                         double unlabeled_ratio, std::uint64_t seed) {
  auto in_unit = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!in_unit(labeled_ratio) || !in_unit(unlabeled_ratio)) {
    throw ArgumentError("split ratios must lie in [0, 1]");
  }
  if (labeled_ratio + unlabeled_ratio > 1.0 + 1e-12) {
    throw ArgumentError("labeled_ratio + unlabeled_ratio must not exceed 1");
  }
  if (!full.unlabeled.empty()) {
    throw ArgumentError("split_corpus needs a fully labeled pool; got unlabeled records");
  }

  const std::size_t n = full.labeled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t state = seed;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(state, i)]);
  }

  const std::size_t n_lab = budget_count(n, labeled_ratio);
  const std::size_t n_unl = budget_count(n, unlabeled_ratio);
  std::vector<std::size_t> lab(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_lab));
  std::vector<std::size_t> unl(order.begin() + static_cast<std::ptrdiff_t>(n_lab),
                               order.begin() + static_cast<std::ptrdiff_t>(n_lab + n_unl));
  std::sort(lab.begin(), lab.end());
  std::sort(unl.begin(), unl.end());

  CorpusSplit out;
  out.name = full.name;
  for (auto i : lab) out.labeled.push_back(full.labeled[i]);
  for (auto i : unl) out.unlabeled.push_back(full.labeled[i].dialogue);
  return out;
}

}  // namespace sicf
