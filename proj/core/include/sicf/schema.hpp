#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sicf/jsonl.hpp"

namespace sicf {

/// Every file format the engine reads or writes.
enum class SchemaKind {
  kCorpus,       // {"id","dialogue":[...],"summary"?}
  kCandidates,   // {"id","candidates":[...]}
  kEmbeddings,   // {"id","role","index":[...],"vector":[...]}
  kTags,         // {"id","scope","turn_idx"|"cand_idx","tokens":[...]}
  kNli,          // {"id","cand_idx","premise_idx","hypothesis_idx","positive","negative"}
  kScores,       // score output
  kRanks,        // fuse output
  kSelection,    // select output
  kMatrices,     // debug matrix dump
  kGridSearch,   // grid-search output
  kElimReport,   // eval-elim report (single JSON document)
};

std::string_view to_string(SchemaKind kind);
SchemaKind parse_schema_kind(std::string_view s);

struct SchemaReport {
  std::size_t records = 0;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

/// Checks every record of `path` against `kind` and collects all errors.
/// For kCandidates, `expected_k` additionally pins the candidate count.
SchemaReport validate_file(const std::filesystem::path& path, SchemaKind kind,
                           std::optional<std::size_t> expected_k = std::nullopt);

/// Single-record checks; return an error message or nullopt.
std::optional<std::string> check_record(const Json& record, SchemaKind kind);

}  // namespace sicf
