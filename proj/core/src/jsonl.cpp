#include "sicf/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "sicf/errors.hpp"
#include "sicf/text.hpp"

namespace sicf {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingFileError("input file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open input file: " + path.string());
  return in;
}

std::string key_str(std::string_view key) { return std::string(key); }

}  // namespace

namespace {

std::vector<JsonlRecord> read_records(const std::filesystem::path& path,
                                      std::vector<std::string>* errors) {
  auto in = open_input(path);
  std::vector<JsonlRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    try {
      Json value;
      try {
        value = Json::parse(line);
      } catch (const Json::parse_error& e) {
        throw SchemaError(line_no, std::string("malformed JSON: ") + e.what());
      }
      if (!value.is_object()) throw SchemaError(line_no, "record is not a JSON object");
      out.push_back({line_no, std::move(value)});
    } catch (const SchemaError& e) {
      if (!errors) throw;
      errors->push_back(e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<JsonlRecord> read_jsonl(const std::filesystem::path& path) {
  return read_records(path, nullptr);
}

std::vector<JsonlRecord> read_jsonl(const std::filesystem::path& path,
                                    std::vector<std::string>& errors) {
  return read_records(path, &errors);
}

Json read_json(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw SchemaError(1, std::string("malformed JSON in ") + path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<OrderedJson>& records) {
  std::string buf;
  for (const auto& r : records) {
    buf += r.dump();
    buf += '\n';
  }
  write_text(path, buf);
}

void write_json(const std::filesystem::path& path, const OrderedJson& doc) {
  write_text(path, doc.dump(2) + "\n");
}

const Json& require_field(const JsonlRecord& rec, std::string_view key) {
  auto it = rec.value.find(key_str(key));
  if (it == rec.value.end()) {
    throw SchemaError(rec.line, "missing required field \"" + key_str(key) + "\"");
  }
  return *it;
}

std::string require_string(const JsonlRecord& rec, std::string_view key) {
  const auto& v = require_field(rec, key);
  if (!v.is_string()) {
    throw SchemaError(rec.line, "field \"" + key_str(key) + "\" must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::string> require_string_array(const JsonlRecord& rec,
                                              std::string_view key) {
  const auto& v = require_field(rec, key);
  if (!v.is_array()) {
    throw SchemaError(rec.line, "field \"" + key_str(key) + "\" must be an array");
  }
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw SchemaError(rec.line, "field \"" + key_str(key) + "\" must hold strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

double require_number(const JsonlRecord& rec, std::string_view key) {
  const auto& v = require_field(rec, key);
  if (!v.is_number()) {
    throw SchemaError(rec.line, "field \"" + key_str(key) + "\" must be a number");
  }
  return v.get<double>();
}

std::size_t require_index(const JsonlRecord& rec, std::string_view key) {
  const auto& v = require_field(rec, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw SchemaError(rec.line,
                      "field \"" + key_str(key) + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace sicf
