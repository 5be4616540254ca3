#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sicf {

/// One dialogue; each turn is one utterance line from the source file.
struct Dialogue {
  std::string id;
  std::vector<std::string> turns;

  /// Turns joined by '\n'.
  std::string raw_text() const;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

struct LabeledDialogue {
  Dialogue dialogue;
  std::string reference;

  friend bool operator==(const LabeledDialogue&, const LabeledDialogue&) = default;
};

/// A dialogue's k generated candidates, in generation order.
struct SummarySet {
  std::string dialogue_id;
  std::vector<std::string> candidates;
  std::optional<std::string> reference;

  std::size_t k() const { return candidates.size(); }
  friend bool operator==(const SummarySet&, const SummarySet&) = default;
};

struct CorpusSplit {
  std::string name;
  std::vector<LabeledDialogue> labeled;
  std::vector<Dialogue> unlabeled;

  std::size_t size() const { return labeled.size() + unlabeled.size(); }
  /// Looks a dialogue up in either side; nullptr when absent.
  const Dialogue* find(const std::string& id) const;
  /// Reference summary for a labeled dialogue, if any.
  const std::string* reference(const std::string& id) const;

  friend bool operator==(const CorpusSplit& a, const CorpusSplit& b) {
    return a.name == b.name && a.labeled == b.labeled && a.unlabeled == b.unlabeled;
  }
};

/// How records of a corpus file are routed.
///  - kLabeled:   every record must carry "summary"; all go to `labeled`.
///  - kUnlabeled: "summary" is ignored; all go to `unlabeled`.
///  - kMixed:     records with "summary" go to `labeled`, the rest to `unlabeled`.
enum class SplitKind { kLabeled, kUnlabeled, kMixed };

CorpusSplit load_corpus(const std::filesystem::path& path, SplitKind schema);
void write_corpus(const std::filesystem::path& path, const CorpusSplit& corpus);

/// Candidate file: {"id","candidates":[...]} per line.
std::vector<SummarySet> load_candidates(const std::filesystem::path& path);
void write_candidates(const std::filesystem::path& path,
                      const std::vector<SummarySet>& sets);

/// Fills SummarySet::reference from the labeled side of `corpus`.
void attach_references(std::vector<SummarySet>& sets, const CorpusSplit& corpus);

/// Samples disjoint labeled/unlabeled subsets from `full.labeled` with a
/// seeded uniform shuffle; sizes are floor(N * ratio). Selected records keep
/// their original relative order. Unlabeled picks drop their reference.
CorpusSplit split_corpus(const CorpusSplit& full, double labeled_ratio,
                         double unlabeled_ratio, std::uint64_t seed);

}  // namespace sicf
