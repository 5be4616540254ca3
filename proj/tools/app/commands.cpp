#include "app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "sicf/errors.hpp"
#include "sicf/schema.hpp"
#include "sicf/text.hpp"

namespace sicf::app {
namespace fs = std::filesystem;

namespace {

struct Inputs {
  CorpusSplit corpus;
  std::vector<SummarySet> sets;
};

Inputs load_inputs(const RunConfig& cfg) {
  if (cfg.corpus.empty()) throw ConfigError("config field \"corpus\" is required");
  if (cfg.candidates.empty()) throw ConfigError("config field \"candidates\" is required");
  Inputs in{load_corpus(cfg.corpus, SplitKind::kMixed), load_candidates(cfg.candidates)};
  for (const auto& s : in.sets) {
    if (s.k() != cfg.k) {
      throw ValidationError("dialogue \"" + s.dialogue_id + "\" has " + std::to_string(s.k()) +
                            " candidates, config k = " + std::to_string(cfg.k));
    }
  }
  attach_references(in.sets, in.corpus);
  return in;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<fs::path>& inputs, const std::vector<std::string>& outputs,
                    const Json& provider) {
  OrderedJson m;
  m["command"] = command;
  m["engine_version"] = kEngineVersion;
  m["config_hash"] = cfg.hash();
  m["config"] = cfg.canonical();
  m["provider"] = provider;
  OrderedJson ins = OrderedJson::array();
  for (const auto& p : inputs) {
    // Artifacts of earlier steps are named relative to the output directory.
    auto shown = p.generic_string();
    const auto rel = p.lexically_normal().lexically_relative(cfg.out.lexically_normal());
    if (!rel.empty() && *rel.begin() != "..") shown = rel.generic_string();
    ins.push_back({{"path", shown}, {"fnv1a64", hex64(fnv1a64(read_file(p)))}});
  }
  m["inputs"] = std::move(ins);
  OrderedJson outs = OrderedJson::array();
  for (const auto& name : outputs) {
    const auto body = read_file(cfg.out / name);
    outs.push_back({{"file", name}, {"bytes", body.size()}, {"fnv1a64", hex64(fnv1a64(body))}});
  }
  m["outputs"] = std::move(outs);
  write_json(cfg.out / ("manifest." + command + ".json"), m);
}

std::vector<EvalSample> eval_samples(const Inputs& in, const std::vector<ScoreBundle>& scores) {
  std::unordered_map<std::string, const SummarySet*> by_id;
  for (const auto& s : in.sets) by_id.emplace(s.dialogue_id, &s);
  std::vector<EvalSample> samples;
  for (const auto& b : scores) {
    auto it = by_id.find(b.dialogue_id);
    if (it == by_id.end()) throw ValidationError("no candidates for scored dialogue " + b.dialogue_id);
    const auto* set = it->second;
    if (!set->reference) throw ValidationError("no reference summary for " + b.dialogue_id);
    if (b.representative >= set->k()) {
      throw ValidationError("representative index out of range for " + b.dialogue_id);
    }
    samples.push_back({b.dialogue_id, set->candidates[b.representative], *set->reference});
  }
  std::sort(samples.begin(), samples.end(),
            [](const EvalSample& a, const EvalSample& b) { return a.id < b.id; });
  return samples;
}

std::vector<std::string> worst_first(const RankTable& table) {
  auto ids = best_first(table);
  std::reverse(ids.begin(), ids.end());
  return ids;
}

std::string pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

std::string plain(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

const std::vector<double>& coefficient_grid() {
  static const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  return grid;
}

void cmd_score(const RunConfig& cfg) {
  const auto in = load_inputs(cfg);
  const auto providers = cfg.make_providers();
  const auto results = score_corpus(in.corpus, in.sets, providers, cfg.scoring(), cfg.threads);

  std::vector<OrderedJson> lines, matrices;
  for (const auto& r : results) {
    lines.push_back(to_json(r.bundle));
    if (cfg.debug_matrices) {
      if (r.coverage) matrices.push_back(matrix_to_json(r.bundle.dialogue_id, *r.coverage));
      matrices.push_back(matrix_to_json(r.bundle.dialogue_id, r.faithfulness));
    }
  }
  write_jsonl(cfg.out / kScoresFile, lines);
  std::vector<std::string> outputs = {kScoresFile};
  if (cfg.debug_matrices) {
    write_jsonl(cfg.out / kMatricesFile, matrices);
    outputs.emplace_back(kMatricesFile);
  }
  write_manifest(cfg, "score", {cfg.corpus, cfg.candidates}, outputs, providers.metadata());
}

void cmd_fuse(const RunConfig& cfg) {
  const auto scores = load_scores(cfg.out / kScoresFile);
  const auto table = fuse_sicf(scores, cfg.weights);
  std::vector<OrderedJson> lines;
  for (const auto& row : table.rows) lines.push_back(to_json(row));
  write_jsonl(cfg.out / kRanksFile, lines);
  write_manifest(cfg, "fuse", {cfg.out / kScoresFile}, {kRanksFile}, cfg.provider_summary());
}

void cmd_select(const RunConfig& cfg) {
  const auto table = load_ranks(cfg.out / kRanksFile, cfg.weights);
  const auto scores = load_scores(cfg.out / kScoresFile);
  std::unordered_map<std::string, const ScoreBundle*> bundles;
  for (const auto& b : scores) bundles.emplace(b.dialogue_id, &b);
  std::unordered_map<std::string, const RankRow*> rows;
  for (const auto& r : table.rows) rows.emplace(r.dialogue_id, &r);

  std::vector<OrderedJson> lines;
  for (const auto& id : select_top(table, cfg.ratio)) {
    auto bit = bundles.find(id);
    if (bit == bundles.end()) throw ValidationError("ranked dialogue " + id + " has no score record");
    const RankRow& row = *rows.at(id);
    OrderedJson j;
    j["id"] = id;
    j["lambda_sicf"] = row.lambda_sicf;
    j["delta"] = {{"sein", row.delta_sein}, {"cov", row.delta_cov}, {"fai", row.delta_fai}};
    j["representative_candidate_idx"] = bit->second->representative;
    j["flags"] = std::vector<std::string>(bit->second->flags.begin(), bit->second->flags.end());
    lines.push_back(std::move(j));
  }
  write_jsonl(cfg.out / kSelectionFile, lines);
  write_manifest(cfg, "select", {cfg.out / kRanksFile, cfg.out / kScoresFile}, {kSelectionFile},
                 cfg.provider_summary());
}

void cmd_eval_elim(const RunConfig& cfg) {
  const auto in = load_inputs(cfg);
  const auto scores = load_scores(cfg.out / kScoresFile);
  const auto table = load_ranks(cfg.out / kRanksFile, cfg.weights);
  const auto samples = eval_samples(in, scores);
  const auto order = worst_first(table);
  const auto random = random_order(samples, cfg.seed);
  const MetricScorer scorer;

  OrderedJson curves, oracle_curves, random_curves, ratios;
  for (auto metric : cfg.metrics) {
    const std::string name(to_string(metric));
    const auto method = elimination_curve(samples, order, metric, scorer);
    const auto oracle =
        elimination_curve(samples, pseudo_oracle_order(samples, metric, scorer), metric, scorer);
    curves[name] = to_json(method);
    oracle_curves[name] = to_json(oracle);
    random_curves[name] = to_json(elimination_curve(samples, random, metric, scorer));
    try {
      ratios[name] = improved_ratio(method.mean_0_90, method.values.front(), oracle.mean_0_90);
    } catch (const UndefinedRatioError&) {
      ratios[name] = nullptr;
    }
  }
  OrderedJson report;
  report["curve"] = std::move(curves);
  report["improved_ratio"] = std::move(ratios);
  report["baselines"] = {{"pseudo_oracle", std::move(oracle_curves)},
                         {"random", std::move(random_curves)}};
  report["samples"] = samples.size();
  write_json(cfg.out / kElimReportFile, report);
  write_manifest(cfg, "eval-elim",
                 {cfg.corpus, cfg.candidates, cfg.out / kScoresFile, cfg.out / kRanksFile},
                 {kElimReportFile}, cfg.provider_summary());
}

void cmd_report(const RunConfig& cfg, const fs::path& ssds_input) {
  const auto report = read_json(cfg.out / kElimReportFile);
  if (auto e = check_record(report, SchemaKind::kElimReport)) {
    throw ValidationError(std::string(kElimReportFile) + ": " + *e);
  }
  std::vector<std::string> metrics;
  for (const auto& [name, _] : report["curve"].items()) metrics.push_back(name);

  std::string csv = "method";
  for (const auto& m : metrics) csv += "," + m + " 0-50," + m + " 0-90";
  csv += "\n";
  auto row = [&](const std::string& label, const Json& curves) {
    csv += label;
    for (const auto& m : metrics) {
      csv += "," + pct(curves.at(m).at("mean_0_50").get<double>());
      csv += "," + pct(curves.at(m).at("mean_0_90").get<double>());
    }
    csv += "\n";
  };
  if (report.contains("baselines")) row("Random Rank", report["baselines"].at("random"));
  row("SiCF", report["curve"]);
  if (report.contains("baselines")) row("Pseudo Oracle", report["baselines"].at("pseudo_oracle"));
  write_text(cfg.out / kUncertaintyCsv, csv);
  std::vector<std::string> outputs = {kUncertaintyCsv};
  std::vector<fs::path> inputs = {cfg.out / kElimReportFile};

  if (!ssds_input.empty()) {
    // {"initial":{metric:v},"oracle":{metric:v},"methods":{name:{metric:v}}}
    OrderedJson doc;
    {
      std::ifstream f(ssds_input);
      if (!f) throw MissingFileError("input file not found: " + ssds_input.string());
      try {
        doc = OrderedJson::parse(f);
      } catch (const OrderedJson::exception& e) {
        throw ValidationError(ssds_input.string() + ": " + e.what());
      }
    }
    for (const char* key : {"initial", "oracle", "methods"}) {
      if (!doc.contains(key) || !doc[key].is_object()) {
        throw ValidationError(ssds_input.string() + ": missing object \"" + key + "\"");
      }
    }
    std::vector<std::string> cols;
    for (const auto& [m, _] : doc["initial"].items()) cols.push_back(m);
    std::string out = "method";
    for (const auto& m : cols) out += "," + m;
    out += "\n";
    auto cell = [&](double v, const std::string& m) {
      const double ini = doc["initial"].at(m).get<double>();
      const double ora = doc["oracle"].at(m).get<double>();
      std::string s = plain(v);
      try {
        s += "(" + std::to_string(std::lround(improved_ratio(v, ini, ora) * 100.0)) + "%)";
      } catch (const UndefinedRatioError&) {
        s += "(n/a)";
      }
      return s;
    };
    auto emit = [&](const std::string& label, const OrderedJson& values) {
      out += label;
      for (const auto& m : cols) {
        if (!values.contains(m)) throw ValidationError(label + " lacks metric " + m);
        out += "," + cell(values.at(m).get<double>(), m);
      }
      out += "\n";
    };
    emit("Initial Fine-Tuned", doc["initial"]);
    for (const auto& [name, values] : doc["methods"].items()) emit(name, values);
    emit("Pseudo Oracle", doc["oracle"]);
    write_text(cfg.out / kSsdsCsv, out);
    outputs.emplace_back(kSsdsCsv);
    inputs.push_back(ssds_input);
  }
  write_manifest(cfg, "report", inputs, outputs, cfg.provider_summary());
}

void cmd_grid_search(const RunConfig& cfg) {
  const auto in = load_inputs(cfg);
  const auto scores = load_scores(cfg.out / kScoresFile);
  const auto samples = eval_samples(in, scores);
  // Rank columns do not depend on the weights.
  const auto base = fuse_sicf(scores, FusionWeights{});
  const MetricScorer scorer;

  struct Point {
    FusionWeights w;
    ElimCurve curve;
    std::size_t grid_index;
  };
  std::vector<Point> points;
  const auto& grid = coefficient_grid();
  for (double a : grid)
    for (double b : grid)
      for (double g : grid) {
        RankTable t = base;
        t.weights = {a, b, g};
        for (auto& row : t.rows) row.lambda_sicf = fused_score(row, t.weights, t.size());
        points.push_back({t.weights, elimination_curve(samples, worst_first(t), cfg.grid_metric, scorer),
                          points.size()});
      }
  std::stable_sort(points.begin(), points.end(), [](const Point& x, const Point& y) {
    return x.curve.mean_0_90 > y.curve.mean_0_90;
  });

  std::vector<OrderedJson> lines;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    OrderedJson j;
    j["rank"] = i + 1;
    j["alpha"] = p.w.alpha;
    j["beta"] = p.w.beta;
    j["gamma"] = p.w.gamma;
    j["metric"] = to_string(cfg.grid_metric);
    j["mean_0_50"] = p.curve.mean_0_50;
    j["mean_0_90"] = p.curve.mean_0_90;
    lines.push_back(std::move(j));
  }
  write_jsonl(cfg.out / kGridSearchFile, lines);
  write_manifest(cfg, "grid-search", {cfg.corpus, cfg.candidates, cfg.out / kScoresFile},
                 {kGridSearchFile}, cfg.provider_summary());
}

void cmd_split(const RunConfig& cfg) {
  if (cfg.corpus.empty()) throw ConfigError("config field \"corpus\" is required");
  const auto full = load_corpus(cfg.corpus, SplitKind::kLabeled);
  const auto split = split_corpus(full, cfg.labeled_ratio, cfg.unlabeled_ratio, cfg.seed);
  CorpusSplit labeled{split.name, split.labeled, {}};
  CorpusSplit unlabeled{split.name, {}, split.unlabeled};
  write_corpus(cfg.out / "labeled.jsonl", labeled);
  write_corpus(cfg.out / "unlabeled.jsonl", unlabeled);
  write_manifest(cfg, "split", {cfg.corpus}, {"labeled.jsonl", "unlabeled.jsonl"},
                 cfg.provider_summary());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudolabel quality scoring, selection and evaluation", "sicf"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, phi, bnn_kind, ssds, schema_kind, validate_path;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> ratio, alpha, beta, gamma, labeled_ratio, unlabeled_ratio;
  std::optional<std::size_t> expected_k;

  app.add_option("--config", config_path, "Run config file (flat JSON object)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads for score")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for splits and random baselines");
  app.add_option("--ratio", ratio, "Selection ratio");
  app.add_option("--alpha", alpha, "Weight of the semantic-invariance rank");
  app.add_option("--beta", beta, "Weight of the coverage rank");
  app.add_option("--gamma", gamma, "Weight of the faithfulness rank");
  app.add_option("--phi", phi, "mean | bnn | m_bnn");
  app.add_option("--bnn-kind", bnn_kind, "predictive | aleatoric | epistemic");

  auto* score = app.add_subcommand("score", "Compute per-dialogue scores");
  auto* fuse = app.add_subcommand("fuse", "Fuse score ranks");
  auto* select = app.add_subcommand("select", "Select the top ratio of dialogues");
  auto* eval = app.add_subcommand("eval-elim", "Force-truth elimination curves");
  auto* report = app.add_subcommand("report", "CSV tables from evaluation results");
  report->add_option("--ssds", ssds, "SSDS metric scores (JSON) for an improved-ratio table");
  auto* grid = app.add_subcommand("grid-search", "Search fusion weights over a 5-value grid");
  auto* split = app.add_subcommand("split", "Seeded labeled/unlabeled corpus split");
  split->add_option("--labeled-ratio", labeled_ratio, "Labeled fraction");
  split->add_option("--unlabeled-ratio", unlabeled_ratio, "Unlabeled fraction");
  auto* validate = app.add_subcommand("validate", "Check a file against its schema");
  validate->add_option("--kind", schema_kind, "Schema kind")->required();
  validate->add_option("--k", expected_k, "Expected candidates per dialogue");
  validate->add_option("file", validate_path, "File to check")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (validate->parsed()) {
      const auto kind = parse_schema_kind(schema_kind);
      const auto rep = validate_file(validate_path, kind, expected_k);
      for (const auto& e : rep.errors) err << validate_path << ": " << e << "\n";
      out << validate_path << ": " << rep.records << " records, " << rep.errors.size()
          << " errors\n";
      return rep.ok() ? kExitOk : kExitInvariant;
    }

    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.seed = *seed;
    if (ratio) cfg.ratio = *ratio;
    if (alpha) cfg.weights.alpha = *alpha;
    if (beta) cfg.weights.beta = *beta;
    if (gamma) cfg.weights.gamma = *gamma;
    if (labeled_ratio) cfg.labeled_ratio = *labeled_ratio;
    if (unlabeled_ratio) cfg.unlabeled_ratio = *unlabeled_ratio;
    try {
      if (!phi.empty()) cfg.phi.method = parse_phi_method(phi);
      if (!bnn_kind.empty()) cfg.phi.bnn_kind = parse_bnn_kind(bnn_kind);
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
    cfg.validate();
    fs::create_directories(cfg.out);

    if (score->parsed()) cmd_score(cfg);
    else if (fuse->parsed()) cmd_fuse(cfg);
    else if (select->parsed()) cmd_select(cfg);
    else if (eval->parsed()) cmd_eval_elim(cfg);
    else if (report->parsed()) cmd_report(cfg, ssds);
    else if (grid->parsed()) cmd_grid_search(cfg);
    else if (split->parsed()) cmd_split(cfg);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "sicf: invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const ArgumentError& e) {
    err << "sicf: invalid argument: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const MissingFileError& e) {
    err << "sicf: " << e.what() << "\n";
    return kExitMissingInput;
  } catch (const std::exception& e) {
    err << "sicf: " << e.what() << "\n";
    return kExitInvariant;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace sicf::app
