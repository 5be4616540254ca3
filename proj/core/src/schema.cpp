#include "sicf/schema.hpp"

#include <cmath>
#include <set>

#include "sicf/errors.hpp"

namespace sicf {
namespace {

using Check = std::optional<std::string>;

bool is_nonneg_int(const Json& v) { return v.is_number_integer() && v.get<long long>() >= 0; }
bool is_pos_int(const Json& v) { return v.is_number_integer() && v.get<long long>() >= 1; }
bool is_finite_number(const Json& v) { return v.is_number() && std::isfinite(v.get<double>()); }
bool is_probability(const Json& v) {
  return is_finite_number(v) && v.get<double>() >= 0.0 && v.get<double>() <= 1.0;
}

Check need(const Json& r, const char* key) {
  if (!r.contains(key)) return std::string("missing field \"") + key + "\"";
  return std::nullopt;
}

#define SICF_NEED(r, key)                 \
  do {                                    \
    if (auto e = need(r, key)) return e;  \
  } while (0)

Check check_id(const Json& r) {
  SICF_NEED(r, "id");
  if (!r["id"].is_string() || r["id"].get<std::string>().empty()) return "\"id\" must be a non-empty string";
  return std::nullopt;
}

Check check_string_list(const Json& r, const char* key, bool non_empty) {
  SICF_NEED(r, key);
  const auto& v = r[key];
  if (!v.is_array()) return std::string("\"") + key + "\" must be an array";
  if (non_empty && v.empty()) return std::string("\"") + key + "\" must be non-empty";
  for (const auto& e : v) {
    if (!e.is_string()) return std::string("\"") + key + "\" must hold strings";
  }
  return std::nullopt;
}

Check check_number_fields(const Json& r, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    SICF_NEED(r, k);
    if (!is_finite_number(r[k])) return std::string("\"") + k + "\" must be a finite number";
  }
  return std::nullopt;
}

Check check_delta(const Json& r) {
  SICF_NEED(r, "delta");
  const auto& d = r["delta"];
  if (!d.is_object()) return "\"delta\" must be an object";
  for (const char* k : {"sein", "cov", "fai"}) {
    if (!d.contains(k) || !is_pos_int(d[k])) return std::string("\"delta.") + k + "\" must be a positive integer";
  }
  return std::nullopt;
}

Check check_curve(const Json& c) {
  if (!c.is_object()) return "curve must be an object";
  for (const char* k : {"ratios", "values"}) {
    if (!c.contains(k) || !c[k].is_array() || c[k].size() != 10) {
      return std::string("curve \"") + k + "\" must hold 10 numbers";
    }
    for (const auto& v : c[k]) {
      if (!is_probability(v)) return std::string("curve \"") + k + "\" entries must lie in [0, 1]";
    }
  }
  for (const char* k : {"mean_0_50", "mean_0_90"}) {
    if (!c.contains(k) || !is_probability(c[k])) return std::string("curve \"") + k + "\" must lie in [0, 1]";
  }
  return std::nullopt;
}

Check check_curve_map(const Json& m, const char* what) {
  if (!m.is_object() || m.empty()) return std::string("\"") + what + "\" must be a non-empty object";
  for (const auto& [metric, curve] : m.items()) {
    if (auto e = check_curve(curve)) return metric + ": " + *e;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(SchemaKind kind) {
  switch (kind) {
    case SchemaKind::kCorpus: return "corpus";
    case SchemaKind::kCandidates: return "candidates";
    case SchemaKind::kEmbeddings: return "embeddings";
    case SchemaKind::kTags: return "tags";
    case SchemaKind::kNli: return "nli";
    case SchemaKind::kScores: return "scores";
    case SchemaKind::kRanks: return "ranks";
    case SchemaKind::kSelection: return "selection";
    case SchemaKind::kMatrices: return "matrices";
    case SchemaKind::kGridSearch: return "grid-search";
    case SchemaKind::kElimReport: return "elim-report";
  }
  return "corpus";
}

SchemaKind parse_schema_kind(std::string_view s) {
  for (auto k : {SchemaKind::kCorpus, SchemaKind::kCandidates, SchemaKind::kEmbeddings,
                 SchemaKind::kTags, SchemaKind::kNli, SchemaKind::kScores, SchemaKind::kRanks,
                 SchemaKind::kSelection, SchemaKind::kMatrices, SchemaKind::kGridSearch,
                 SchemaKind::kElimReport}) {
    if (to_string(k) == s) return k;
  }
  throw ArgumentError("unknown schema kind \"" + std::string(s) + "\"");
}

std::optional<std::string> check_record(const Json& r, SchemaKind kind) {
  if (!r.is_object()) return "record is not a JSON object";
  switch (kind) {
    case SchemaKind::kCorpus: {
      if (auto e = check_id(r)) return e;
      if (auto e = check_string_list(r, "dialogue", true)) return e;
      if (r.contains("summary") && !r["summary"].is_string()) return "\"summary\" must be a string";
      return std::nullopt;
    }
    case SchemaKind::kCandidates: {
      if (auto e = check_id(r)) return e;
      return check_string_list(r, "candidates", true);
    }
    case SchemaKind::kEmbeddings: {
      if (auto e = check_id(r)) return e;
      SICF_NEED(r, "role");
      const auto role = r["role"].is_string() ? r["role"].get<std::string>() : "";
      std::size_t arity = 0;
      if (role == "candidate_text" || role == "dialogue_noun") arity = 1;
      else if (role == "summary_noun") arity = 2;
      else return "\"role\" must be dialogue_noun|summary_noun|candidate_text";
      SICF_NEED(r, "index");
      if (!r["index"].is_array() || r["index"].size() != arity) {
        return "\"index\" for role " + role + " must hold " + std::to_string(arity) + " integer(s)";
      }
      for (const auto& i : r["index"])
        if (!is_nonneg_int(i)) return "\"index\" must hold non-negative integers";
      SICF_NEED(r, "vector");
      if (!r["vector"].is_array() || r["vector"].empty()) return "\"vector\" must be a non-empty array";
      for (const auto& x : r["vector"])
        if (!is_finite_number(x)) return "\"vector\" must hold finite numbers";
      return std::nullopt;
    }
    case SchemaKind::kTags: {
      if (auto e = check_id(r)) return e;
      SICF_NEED(r, "scope");
      if (r["scope"] == "dialogue") {
        SICF_NEED(r, "turn_idx");
        if (!is_nonneg_int(r["turn_idx"])) return "\"turn_idx\" must be a non-negative integer";
      } else if (r["scope"] == "candidate") {
        SICF_NEED(r, "cand_idx");
        if (!is_nonneg_int(r["cand_idx"])) return "\"cand_idx\" must be a non-negative integer";
      } else {
        return "\"scope\" must be dialogue|candidate";
      }
      SICF_NEED(r, "tokens");
      if (!r["tokens"].is_array()) return "\"tokens\" must be an array";
      long long last = -1;
      for (const auto& t : r["tokens"]) {
        if (!t.is_object() || !t.contains("surface") || !t["surface"].is_string() ||
            !t.contains("tag") || !t.contains("position") || !is_nonneg_int(t["position"])) {
          return "token must be {\"surface\",\"tag\",\"position\"}";
        }
        const auto& tag = t["tag"];
        if (tag != "NOUN" && tag != "PROPER_NOUN" && tag != "OTHER") {
          return "token tag must be NOUN|PROPER_NOUN|OTHER";
        }
        if (t["position"].get<long long>() <= last) return "token positions must be strictly increasing";
        last = t["position"].get<long long>();
      }
      return std::nullopt;
    }
    case SchemaKind::kNli: {
      if (auto e = check_id(r)) return e;
      for (const char* k : {"cand_idx", "premise_idx", "hypothesis_idx"}) {
        SICF_NEED(r, k);
        if (!is_nonneg_int(r[k])) return std::string("\"") + k + "\" must be a non-negative integer";
      }
      for (const char* k : {"positive", "negative"}) {
        SICF_NEED(r, k);
        if (!is_probability(r[k])) return std::string("\"") + k + "\" must lie in [0, 1]";
      }
      return std::nullopt;
    }
    case SchemaKind::kScores: {
      if (auto e = check_id(r)) return e;
      if (auto e = check_number_fields(r, {"lambda_sein", "lambda_cov", "lambda_fai"})) return e;
      if (auto e = check_string_list(r, "flags", false)) return e;
      SICF_NEED(r, "phi");
      const auto& phi = r["phi"];
      if (!phi.is_object() || !phi.contains("phi") || !phi.contains("bnn_kind")) {
        return "\"phi\" must be {\"phi\",\"bnn_kind\"}";
      }
      if (phi["phi"] != "mean" && phi["phi"] != "bnn" && phi["phi"] != "m_bnn") return "bad \"phi.phi\"";
      if (phi["bnn_kind"] != "predictive" && phi["bnn_kind"] != "aleatoric" &&
          phi["bnn_kind"] != "epistemic") {
        return "bad \"phi.bnn_kind\"";
      }
      SICF_NEED(r, "representative_candidate_idx");
      if (!is_nonneg_int(r["representative_candidate_idx"])) {
        return "\"representative_candidate_idx\" must be a non-negative integer";
      }
      return std::nullopt;
    }
    case SchemaKind::kRanks: {
      if (auto e = check_id(r)) return e;
      if (auto e = check_delta(r)) return e;
      return check_number_fields(r, {"lambda_sicf"});
    }
    case SchemaKind::kSelection: {
      if (auto e = check_id(r)) return e;
      if (auto e = check_number_fields(r, {"lambda_sicf"})) return e;
      if (auto e = check_delta(r)) return e;
      SICF_NEED(r, "representative_candidate_idx");
      if (!is_nonneg_int(r["representative_candidate_idx"])) {
        return "\"representative_candidate_idx\" must be a non-negative integer";
      }
      return check_string_list(r, "flags", false);
    }
    case SchemaKind::kMatrices: {
      if (auto e = check_id(r)) return e;
      SICF_NEED(r, "kind");
      if (r["kind"] != "coverage" && r["kind"] != "faithfulness") return "\"kind\" must be coverage|faithfulness";
      SICF_NEED(r, "rows");
      SICF_NEED(r, "cols");
      if (!is_pos_int(r["rows"]) || !is_pos_int(r["cols"])) return "\"rows\"/\"cols\" must be positive integers";
      SICF_NEED(r, "values");
      const auto rows = r["rows"].get<std::size_t>();
      const auto cols = r["cols"].get<std::size_t>();
      if (!r["values"].is_array() || r["values"].size() != rows) return "\"values\" must hold `rows` rows";
      for (const auto& row : r["values"]) {
        if (!row.is_array() || row.size() != cols) return "each row must hold `cols` numbers";
        for (const auto& v : row)
          if (!is_finite_number(v)) return "matrix values must be finite";
      }
      return std::nullopt;
    }
    case SchemaKind::kGridSearch: {
      if (auto e = check_number_fields(r, {"alpha", "beta", "gamma", "mean_0_50", "mean_0_90"})) return e;
      SICF_NEED(r, "rank");
      if (!is_pos_int(r["rank"])) return "\"rank\" must be a positive integer";
      SICF_NEED(r, "metric");
      if (!r["metric"].is_string()) return "\"metric\" must be a string";
      return std::nullopt;
    }
    case SchemaKind::kElimReport: {
      SICF_NEED(r, "curve");
      if (auto e = check_curve_map(r["curve"], "curve")) return e;
      SICF_NEED(r, "improved_ratio");
      if (!r["improved_ratio"].is_object()) return "\"improved_ratio\" must be an object";
      for (const auto& [metric, v] : r["improved_ratio"].items()) {
        if (!v.is_null() && !is_finite_number(v)) return "improved_ratio." + metric + " must be a number or null";
        if (!r["curve"].contains(metric)) return "improved_ratio." + metric + " has no curve";
      }
      if (r.contains("baselines")) {
        if (!r["baselines"].is_object()) return "\"baselines\" must be an object";
        for (const auto& [name, m] : r["baselines"].items()) {
          if (auto e = check_curve_map(m, name.c_str())) return name + ": " + *e;
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

#undef SICF_NEED

SchemaReport validate_file(const std::filesystem::path& path, SchemaKind kind,
                           std::optional<std::size_t> expected_k) {
  SchemaReport report;
  if (kind == SchemaKind::kElimReport) {
    try {
      const auto doc = read_json(path);
      report.records = 1;
      if (auto e = check_record(doc, kind)) report.errors.push_back(*e);
    } catch (const SchemaError& e) {
      report.errors.push_back(e.what());
    }
    return report;
  }

  const auto records = read_jsonl(path, report.errors);
  report.records = records.size() + report.errors.size();

  std::set<std::string> keys;
  std::optional<std::size_t> dim;
  for (const auto& rec : records) {
    auto fail = [&](const std::string& msg) {
      report.errors.push_back("line " + std::to_string(rec.line) + ": " + msg);
    };
    if (auto e = check_record(rec.value, kind)) {
      fail(*e);
      continue;
    }
    // Cross-record invariants.
    const auto& r = rec.value;
    std::string key;
    switch (kind) {
      case SchemaKind::kCorpus:
      case SchemaKind::kCandidates:
      case SchemaKind::kScores:
      case SchemaKind::kRanks:
      case SchemaKind::kSelection:
        key = r["id"].get<std::string>();
        break;
      case SchemaKind::kMatrices:
        key = r["id"].get<std::string>() + "/" + r["kind"].get<std::string>();
        break;
      case SchemaKind::kEmbeddings:
        key = r["id"].get<std::string>() + "/" + r["role"].get<std::string>() + r["index"].dump();
        if (!dim) dim = r["vector"].size();
        if (r["vector"].size() != *dim) fail("vector dim differs from first record");
        break;
      case SchemaKind::kTags:
        key = r["id"].get<std::string>() + "/" + r["scope"].get<std::string>() + "/" +
              (r["scope"] == "dialogue" ? r["turn_idx"].dump() : r["cand_idx"].dump());
        break;
      case SchemaKind::kNli:
        key = r["id"].get<std::string>() + "/" + r["cand_idx"].dump() + "/" +
              r["premise_idx"].dump() + "/" + r["hypothesis_idx"].dump();
        break;
      default:
        break;
    }
    if (!key.empty() && !keys.insert(key).second) fail("duplicate key " + key);
    if (kind == SchemaKind::kCandidates && expected_k && r["candidates"].size() != *expected_k) {
      fail("expected " + std::to_string(*expected_k) + " candidates, found " +
           std::to_string(r["candidates"].size()));
    }
  }
  return report;
}

}  // namespace sicf
