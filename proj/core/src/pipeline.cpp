#include "sicf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "sicf/errors.hpp"
#include "sicf/text.hpp"

namespace sicf {

std::vector<std::vector<TaggedToken>> tag_dialogue(const Dialogue& dialogue,
                                                   const Tagger& tagger) {
  std::vector<std::vector<TaggedToken>> out;
  out.reserve(dialogue.turns.size());
  for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
    out.push_back(tagger.tag({dialogue.id, TagScope::kDialogue, t}, dialogue.turns[t]));
  }
  return out;
}

std::vector<NounType> collect_noun_types(
    const std::vector<std::vector<TaggedToken>>& tagged_units) {
  std::vector<NounType> types;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& unit : tagged_units) {
    for (const auto& tok : unit) {
      if (!tok.is_noun()) continue;
      auto surface = to_lower(tok.surface);
      auto [it, inserted] = slot.emplace(surface, types.size());
      if (inserted) {
        types.push_back({std::move(surface), false, 0, {}});
      }
      auto& type = types[it->second];
      ++type.occurrences;
      type.is_proper = type.is_proper || tok.tag == PosTag::kProperNoun;
    }
  }
  return types;
}

std::size_t sentence_noun_weight(const std::vector<TaggedToken>& tokens) {
  std::size_t nouns = 0;
  std::vector<std::string> proper;
  for (const auto& tok : tokens) {
    if (tok.tag == PosTag::kNoun) {
      ++nouns;
    } else if (tok.tag == PosTag::kProperNoun) {
      auto s = to_lower(tok.surface);
      if (std::find(proper.begin(), proper.end(), s) == proper.end()) proper.push_back(std::move(s));
    }
  }
  return nouns + proper.size();
}

CoverageInputs build_coverage_inputs(const Dialogue& dialogue, const SummarySet& set,
                                     const Providers& providers) {
  CoverageInputs in;
  in.dialogue_nouns = collect_noun_types(tag_dialogue(dialogue, *providers.tagger));
  for (std::size_t j = 0; j < in.dialogue_nouns.size(); ++j) {
    auto& noun = in.dialogue_nouns[j];
    noun.embedding = providers.embedder->embed(
        {dialogue.id, EmbeddingRole::kDialogueNoun, {j}}, noun.surface);
  }
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    auto tags = providers.tagger->tag({dialogue.id, TagScope::kCandidate, i}, set.candidates[i]);
    auto types = collect_noun_types({tags});
    std::vector<EmbeddingVector> embs;
    embs.reserve(types.size());
    for (std::size_t j = 0; j < types.size(); ++j) {
      embs.push_back(providers.embedder->embed(
          {dialogue.id, EmbeddingRole::kSummaryNoun, {i, j}}, types[j].surface));
    }
    in.candidate_nouns.push_back(std::move(embs));
  }
  return in;
}

FaithfulnessInputs build_faithfulness_inputs(const Dialogue& dialogue, const SummarySet& set,
                                             const Providers& providers) {
  FaithfulnessInputs in;
  in.dialogue_id = dialogue.id;
  const auto tagged = tag_dialogue(dialogue, *providers.tagger);
  for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
    in.dialogue_sentences.push_back({dialogue.turns[t], sentence_noun_weight(tagged[t])});
  }
  for (const auto& c : set.candidates) in.candidate_sentences.push_back(split_sentences(c));
  return in;
}

std::vector<EmbeddingVector> candidate_embeddings(const SummarySet& set,
                                                  const Embedder& embedder) {
  std::vector<EmbeddingVector> out;
  out.reserve(set.candidates.size());
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    out.push_back(embedder.embed({set.dialogue_id, EmbeddingRole::kCandidateText, {i}},
                                 set.candidates[i]));
  }
  return out;
}

DialogueScore score_dialogue(const Dialogue& dialogue, const SummarySet& set,
                             const Providers& providers, const ScoringConfig& config) {
  if (set.candidates.empty()) throw ArgumentError("no candidates for " + dialogue.id);
  DialogueScore out;
  auto& b = out.bundle;
  b.dialogue_id = dialogue.id;
  b.phi = config.phi;

  const auto embs = candidate_embeddings(set, *providers.embedder);
  b.lambda_sein = semantic_invariance(embs);
  b.representative = representative_summary(embs);

  out.coverage = coverage_matrix(build_coverage_inputs(dialogue, set, providers),
                                 config.penalty.coverage);
  if (out.coverage) {
    b.lambda_cov = apply_phi(*out.coverage, config.phi);
  } else {
    b.lambda_cov = 0.0;
    b.flags.insert(kCoverageDegenerate);
  }

  out.faithfulness = faithfulness_matrix(build_faithfulness_inputs(dialogue, set, providers),
                                         *providers.nli, config.penalty);
  b.lambda_fai = apply_phi(out.faithfulness, config.phi);

  for (double v : {b.lambda_sein, b.lambda_cov, b.lambda_fai}) {
    if (!std::isfinite(v)) throw InvariantError("non-finite score for " + dialogue.id);
  }
  return out;
}

std::vector<DialogueScore> score_corpus(const CorpusSplit& corpus,
                                        std::span<const SummarySet> sets,
                                        const Providers& providers,
                                        const ScoringConfig& config, unsigned threads) {
  std::vector<std::pair<const Dialogue*, const SummarySet*>> jobs;
  for (const auto& s : sets) {
    const Dialogue* d = corpus.find(s.dialogue_id);
    if (!d) throw ValidationError("candidate set for unknown dialogue \"" + s.dialogue_id + "\"");
    jobs.emplace_back(d, &s);
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const auto& a, const auto& b) { return a.first->id < b.first->id; });

  std::vector<std::optional<DialogueScore>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = score_dialogue(*jobs[i].first, *jobs[i].second, providers, config);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<DialogueScore> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

// --- serialization -----------------------------------------------------------

OrderedJson to_json(const ScoreBundle& b) {
  OrderedJson j;
  j["id"] = b.dialogue_id;
  j["lambda_sein"] = b.lambda_sein;
  j["lambda_cov"] = b.lambda_cov;
  j["lambda_fai"] = b.lambda_fai;
  j["flags"] = std::vector<std::string>(b.flags.begin(), b.flags.end());
  j["phi"] = {{"phi", to_string(b.phi.method)}, {"bnn_kind", to_string(b.phi.bnn_kind)}};
  j["representative_candidate_idx"] = b.representative;
  return j;
}

ScoreBundle score_bundle_from_json(const JsonlRecord& rec) {
  ScoreBundle b;
  b.dialogue_id = require_string(rec, "id");
  b.lambda_sein = require_number(rec, "lambda_sein");
  b.lambda_cov = require_number(rec, "lambda_cov");
  b.lambda_fai = require_number(rec, "lambda_fai");
  for (const auto& f : require_string_array(rec, "flags")) b.flags.insert(f);
  const auto& phi = require_field(rec, "phi");
  if (!phi.is_object() || !phi.contains("phi") || !phi.contains("bnn_kind")) {
    throw SchemaError(rec.line, "field \"phi\" must be {\"phi\",\"bnn_kind\"}");
  }
  try {
    b.phi.method = parse_phi_method(phi["phi"].get<std::string>());
    b.phi.bnn_kind = parse_bnn_kind(phi["bnn_kind"].get<std::string>());
  } catch (const std::exception& e) {
    throw SchemaError(rec.line, e.what());
  }
  b.representative = require_index(rec, "representative_candidate_idx");
  return b;
}

OrderedJson to_json(const RankRow& row) {
  OrderedJson j;
  j["id"] = row.dialogue_id;
  j["delta"] = {{"sein", row.delta_sein}, {"cov", row.delta_cov}, {"fai", row.delta_fai}};
  j["lambda_sicf"] = row.lambda_sicf;
  return j;
}

RankRow rank_row_from_json(const JsonlRecord& rec) {
  RankRow row;
  row.dialogue_id = require_string(rec, "id");
  const auto& d = require_field(rec, "delta");
  auto get = [&](const char* key) {
    if (!d.is_object() || !d.contains(key) || !d[key].is_number_integer() ||
        d[key].get<long long>() < 1) {
      throw SchemaError(rec.line, std::string("delta.") + key + " must be a positive integer");
    }
    return d[key].get<std::size_t>();
  };
  row.delta_sein = get("sein");
  row.delta_cov = get("cov");
  row.delta_fai = get("fai");
  row.lambda_sicf = require_number(rec, "lambda_sicf");
  return row;
}

OrderedJson matrix_to_json(const std::string& dialogue_id, const QualityMatrix& m) {
  OrderedJson j;
  j["id"] = dialogue_id;
  j["kind"] = to_string(m.kind());
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  OrderedJson values = OrderedJson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    values.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  j["values"] = std::move(values);
  return j;
}

OrderedJson to_json(const ElimCurve& c) {
  OrderedJson j;
  j["ratios"] = c.ratios;
  j["values"] = c.values;
  j["mean_0_50"] = c.mean_0_50;
  j["mean_0_90"] = c.mean_0_90;
  return j;
}

std::vector<ScoreBundle> load_scores(const std::filesystem::path& path) {
  std::vector<ScoreBundle> out;
  for (const auto& rec : read_jsonl(path)) out.push_back(score_bundle_from_json(rec));
  if (out.empty()) throw EmptyCorpusError("score file has no records: " + path.string());
  return out;
}

RankTable load_ranks(const std::filesystem::path& path, const FusionWeights& weights) {
  RankTable t;
  t.weights = weights;
  for (const auto& rec : read_jsonl(path)) t.rows.push_back(rank_row_from_json(rec));
  if (t.rows.empty()) throw EmptyCorpusError("rank file has no records: " + path.string());
  return t;
}

}  // namespace sicf
