#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sicf {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

struct JsonlRecord {
  std::size_t line;  // 1-based line number in the source file
  Json value;
};

/// Reads a line-delimited JSON file. Blank lines are skipped; every other
/// line must hold one JSON object.
std::vector<JsonlRecord> read_jsonl(const std::filesystem::path& path);
/// Like read_jsonl, but malformed lines are reported into `errors` (as
/// SchemaError messages) and skipped instead of thrown.
std::vector<JsonlRecord> read_jsonl(const std::filesystem::path& path,
                                    std::vector<std::string>& errors);

Json read_json(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
void write_jsonl(const std::filesystem::path& path,
                 const std::vector<OrderedJson>& records);
void write_json(const std::filesystem::path& path, const OrderedJson& doc);

// Field accessors raising SchemaError with the record's line number.
const Json& require_field(const JsonlRecord& rec, std::string_view key);
std::string require_string(const JsonlRecord& rec, std::string_view key);
std::vector<std::string> require_string_array(const JsonlRecord& rec,
                                              std::string_view key);
double require_number(const JsonlRecord& rec, std::string_view key);
std::size_t require_index(const JsonlRecord& rec, std::string_view key);

}  // namespace sicf
