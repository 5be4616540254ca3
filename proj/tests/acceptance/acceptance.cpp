// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "app/commands.hpp"
#include "sicf/elimination.hpp"
#include "sicf/fusion.hpp"
#include "sicf/metrics.hpp"
#include "sicf/pipeline.hpp"
#include "sicf/uncertainty.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

namespace fs = std::filesystem;
using namespace sicf;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome improved_ratio_reproduction() {
  struct Row {
    const char* label;
    double m, ini, ora;
    int percent;
  };
  const std::vector<Row> rows = {
      {"SAMSUM R1 SiCF mean", 45.85, 43.90, 44.92, 191},
      {"SAMSUM R1 full unlabeled", 44.32, 43.90, 44.92, 41},
      {"SAMSUM R1 BNN", 45.20, 43.90, 44.92, 127},
      {"SAMSUM R1 m+BNN", 45.14, 43.90, 44.92, 121},
      {"SAMSUM R1 random rank", 44.98, 43.90, 44.92, 105},
      {"SAMSUM R2 SiCF mean", 19.90, 18.49, 19.87, 102},
      {"SAMSUM BERTScore SiCF mean", 44.89, 43.74, 44.32, 198},
      {"TODSUM R1 SiCF mean", 77.94, 76.60, 79.09, 53},
      {"TODSUM R2 SiCF mean", 61.01, 59.51, 63.19, 40},
  };
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& r : rows) {
    const double got = 100.0 * improved_ratio(r.m, r.ini, r.ora);
    const double err = std::abs(got - r.percent);
    worst = std::max(worst, err);
    if (err > 1.0) o.fail(std::string(r.label) + " gives " + fmt("%.2f%%", got));
  }
  const double secs = seconds_since(t0);
  if (secs >= 1.0) o.fail("took " + fmt("%.3f s", secs));
  if (o.ok) o.detail = std::to_string(rows.size()) + " triples, max error " + fmt("%.2f pp", worst);
  return o;
}

Outcome bnn_decomposition() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::normal_distribution<double> g(0.0, 3.0);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    QualityMatrix raw(1 + rng() % 8, 1 + rng() % 12, MatrixKind::kCoverage);
    for (double& v : raw.values()) v = g(rng);
    const auto m = minmax_normalize(raw);
    const double pred = bnn_predictive(m), alea = bnn_aleatoric(m), epi = bnn_epistemic(m);
    const double gap = std::abs(pred - alea - epi);
    worst = std::max(worst, gap);
    if (gap > 1e-9) o.fail("decomposition gap " + fmt("%.3g", gap));
    if (!(alea >= 0.0 && alea <= pred + 1e-12 && pred <= m.cols() * std::numbers::ln2 + 1e-12)) {
      o.fail("bounds violated at trial " + std::to_string(t));
    }
    if (epi < 0.0) o.fail("negative epistemic term");
  }
  const double secs = seconds_since(t0);
  if (secs >= 5.0) o.fail("took " + fmt("%.3f s", secs));
  if (o.ok) o.detail = "1000 matrices, max gap " + fmt("%.2g", worst) + ", " + fmt("%.3f s", secs);
  return o;
}

Outcome metric_oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(1002);
  const SyntheticEmbedder emb;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    auto c = testing::random_tokens(rng, 12);
    auto r = testing::random_tokens(rng, 12);
    if (rouge_n(c, r, 1) != oracle::rouge_n(c, r, 1)) o.fail("rouge1 mismatch at pair " + std::to_string(t));
    if (rouge_n(c, r, 2) != oracle::rouge_n(c, r, 2)) o.fail("rouge2 mismatch at pair " + std::to_string(t));
    if (rouge_l(c, r) != oracle::rouge_l(c, r)) o.fail("rougeL mismatch at pair " + std::to_string(t));
    if (c.empty()) c.push_back("w0");
    if (r.empty()) r.push_back("w1");
    std::vector<std::vector<double>> ce, re;
    for (const auto& w : c) ce.push_back(emb.embed_text(w).values);
    for (const auto& w : r) re.push_back(emb.embed_text(w).values);
    const double gap = std::abs(emb_f(c, r, emb) - oracle::emb_f(ce, re));
    worst = std::max(worst, gap);
    if (gap > 1e-9) o.fail("emb_f gap " + fmt("%.3g", gap));
  }
  if (o.ok) o.detail = "50 pairs exact for ROUGE-1/2/L, emb_f max gap " + fmt("%.2g", worst);
  return o;
}

Outcome elimination_sanity() {
  Outcome o;
  std::mt19937_64 rng(1003);
  CorpusSplit corpus;
  std::vector<SummarySet> sets;
  std::map<std::string, std::string> refs;
  for (int i = 0; i < 100; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "e%03d", i);
    auto [d, s] = testing::random_dialogue(rng, id, 6);
    refs[id] = testing::random_sentence(rng, 2, 10);
    corpus.labeled.push_back({d, refs[id]});
    sets.push_back(s);
  }
  const auto scores = score_corpus(corpus, sets, Providers::synthetic(), {});
  std::vector<EvalSample> samples;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& b = scores[i].bundle;
    samples.push_back({b.dialogue_id, sets[i].candidates[b.representative], refs[b.dialogue_id]});
  }
  const MetricScorer scorer;
  for (auto metric : all_metrics()) {
    const auto name = std::string(to_string(metric));
    const auto oracle = elimination_curve(samples, pseudo_oracle_order(samples, metric, scorer), metric, scorer);
    std::vector<double> mean(10, 0.0);
    double mean_090 = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto c = elimination_curve(samples, random_order(samples, seed), metric, scorer);
      for (std::size_t p = 0; p < 10; ++p) mean[p] += c.values[p] / 20.0;
      mean_090 += c.mean_0_90 / 20.0;
    }
    for (std::size_t p = 0; p < 10; ++p) {
      if (oracle.values[p] < mean[p] - 1e-12) o.fail(name + " oracle below random mean at point " + std::to_string(p));
    }
    if (oracle.mean_0_90 < mean_090 - 1e-12) o.fail(name + " oracle mean_0_90 below random mean");
  }

  const std::vector<EvalSample> four = {{"a", "the cat sat on the mat", "the cat sat on the mat"},
                                        {"b", "a dog", "the dog barked loudly"},
                                        {"c", "nothing here", "the party is on friday"},
                                        {"d", "Tom buys cake", "Tom buys the cake"}};
  for (auto metric : all_metrics()) {
    const auto best = elimination_curve(four, pseudo_oracle_order(four, metric, scorer), metric, scorer);
    std::vector<std::string> perm = {"a", "b", "c", "d"};
    int n = 0;
    do {
      const auto c = elimination_curve(four, perm, metric, scorer);
      if (c.mean_0_90 > best.mean_0_90 + 1e-12) o.fail(std::string(to_string(metric)) + " permutation beats the oracle");
      ++n;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (n != 24) o.fail("expected 24 permutations");
  }
  if (o.ok) o.detail = "100 samples x 4 metrics vs 20 random orders; 4-sample oracle maximal over 24 orders";
  return o;
}

std::vector<ScoreBundle> random_bundles(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ScoreBundle> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].dialogue_id = "f" + std::to_string(10000 + i);
    out[i].lambda_sein = g(rng);
    out[i].lambda_cov = g(rng);
    out[i].lambda_fai = g(rng);
  }
  return out;
}

Outcome fusion_properties() {
  Outcome o;
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto weights = [&] {
    const auto& grid = app::coefficient_grid();
    FusionWeights w{grid[rng() % 5], grid[rng() % 5], grid[rng() % 5]};
    if (w.alpha + w.beta + w.gamma == 0.0) w.alpha = 1.0;
    return w;
  };
  for (int t = 0; t < 100; ++t) {
    const auto b = random_bundles(rng, 1 + rng() % 80);
    const auto table = fuse_sicf(b, weights());
    std::vector<std::size_t> s, c, f, expected(b.size());
    std::iota(expected.begin(), expected.end(), std::size_t{1});
    for (const auto& r : table.rows) {
      s.push_back(r.delta_sein);
      c.push_back(r.delta_cov);
      f.push_back(r.delta_fai);
    }
    for (auto* col : {&s, &c, &f}) {
      std::sort(col->begin(), col->end());
      if (*col != expected) o.fail("rank column is not a permutation of 1..N");
    }
  }
  for (int t = 0; t < 100; ++t) {
    auto b = random_bundles(rng, 2 + rng() % 80);
    const auto w = weights();
    const std::size_t i = rng() % b.size();
    const double before = fuse_sicf(b, w).rows[i].lambda_sicf;
    const double step = 0.01 + 2.0 * u(rng);
    switch (rng() % 3) {
      case 0: b[i].lambda_sein -= step; break;
      case 1: b[i].lambda_cov -= step; break;
      default: b[i].lambda_fai -= step; break;
    }
    if (fuse_sicf(b, w).rows[i].lambda_sicf < before) o.fail("improving a raw score lowered the fused score");
  }
  const std::vector<std::function<double(double)>> transforms = {
      [](double x) { return std::exp(x); }, [](double x) { return 5.0 * x - 3.0; },
      [](double x) { return x * x * x; }, [](double x) { return std::atan(x); }};
  for (int t = 0; t < 100; ++t) {
    auto b = random_bundles(rng, 1 + rng() % 80);
    const auto w = weights();
    const auto base = best_first(fuse_sicf(b, w));
    const auto& fn = transforms[rng() % transforms.size()];
    const int column = static_cast<int>(rng() % 3);
    for (auto& x : b) {
      double& v = column == 0 ? x.lambda_sein : column == 1 ? x.lambda_cov : x.lambda_fai;
      v = fn(v);
    }
    if (best_first(fuse_sicf(b, w)) != base) o.fail("monotone rescaling changed the ordering");
  }
  if (o.ok) o.detail = "3 properties x 100 trials";
  return o;
}

std::map<std::string, std::string> run_pipeline(const fs::path& out, unsigned threads) {
  const auto cfg = (testing::toy_dir() / "config.json").string();
  std::map<std::string, std::string> files;
  for (const char* cmd : {"score", "fuse", "select", "eval-elim"}) {
    std::ostringstream so, se;
    const int code = app::run_cli({cmd, "--config", cfg, "--out", out.string(), "--threads",
                                   std::to_string(threads)}, so, se);
    if (code != 0) {
      files["<error>"] = std::string(cmd) + " exited " + std::to_string(code) + ": " + se.str();
      return files;
    }
  }
  for (const auto& e : fs::directory_iterator(out)) files[e.path().filename().string()] = testing::slurp(e.path());
  return files;
}

Outcome determinism() {
  Outcome o;
  testing::TempDir tmp;
  std::vector<std::map<std::string, std::string>> runs;
  int n = 0;
  for (unsigned threads : {1u, 4u}) {
    for (int rep = 0; rep < 3; ++rep) runs.push_back(run_pipeline(tmp / ("run" + std::to_string(n++)), threads));
  }
  for (const auto& r : runs) {
    if (r.count("<error>")) {
      o.fail(r.at("<error>"));
      return o;
    }
  }
  const auto& ref = runs.front();
  for (const char* must : {"scores.jsonl", "ranks.jsonl", "selection.jsonl", "elim_report.json"}) {
    if (!ref.count(must)) o.fail(std::string("missing artifact ") + must);
  }
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i] != ref) o.fail("run " + std::to_string(i) + " differs from run 0");
  }
  if (o.ok) o.detail = std::to_string(ref.size()) + " artifacts identical over 6 runs (3 x threads 1, 3 x threads 4)";
  return o;
}

Outcome permutation_invariance() {
  Outcome o;
  std::mt19937_64 rng(1005);
  const auto prov = Providers::synthetic();
  std::vector<PhiConfig> variants = {{PhiMethod::kMean, BnnKind::kPredictive}};
  for (auto m : {PhiMethod::kBnn, PhiMethod::kMeanBnn}) {
    for (auto k : {BnnKind::kPredictive, BnnKind::kAleatoric, BnnKind::kEpistemic}) variants.push_back({m, k});
  }
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    auto [d, s] = testing::random_dialogue(rng, "p" + std::to_string(t), 2 + rng() % 7);
    auto shuffled = s;
    std::shuffle(shuffled.candidates.begin(), shuffled.candidates.end(), rng);
    for (const auto& phi : variants) {
      const ScoringConfig cfg{phi, {}};
      const auto a = score_dialogue(d, s, prov, cfg).bundle;
      const auto b = score_dialogue(d, shuffled, prov, cfg).bundle;
      for (double gap : {std::abs(a.lambda_sein - b.lambda_sein), std::abs(a.lambda_cov - b.lambda_cov),
                         std::abs(a.lambda_fai - b.lambda_fai)}) {
        worst = std::max(worst, gap);
        if (gap > 1e-12) o.fail("trial " + std::to_string(t) + " " + std::string(to_string(phi.method)) + " moved by " + fmt("%.3g", gap));
      }
    }
  }
  if (o.ok) o.detail = "200 dialogues x " + std::to_string(variants.size()) + " phi variants, max gap " + fmt("%.2g", worst);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"improved-ratio reproduction", improved_ratio_reproduction},
      {"bnn decomposition", bnn_decomposition},
      {"metric oracle equivalence", metric_oracle_equivalence},
      {"elimination sanity", elimination_sanity},
      {"fusion properties", fusion_properties},
      {"determinism", determinism},
      {"permutation invariance", permutation_invariance},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << "\n";
    failures += o.ok ? 0 : 1;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
