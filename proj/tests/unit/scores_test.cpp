#include <atomic>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sicf/errors.hpp"
#include "sicf/scores.hpp"
#include "support/oracles.hpp"

using namespace sicf;

namespace {

std::vector<EmbeddingVector> random_vectors(std::mt19937_64& rng, std::size_t k, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<EmbeddingVector> out(k);
  for (auto& v : out) {
    v.values.resize(d);
    for (auto& x : v.values) x = g(rng);
  }
  return out;
}

std::vector<std::vector<double>> raw(const std::vector<EmbeddingVector>& vs) {
  std::vector<std::vector<double>> out;
  for (const auto& v : vs) out.push_back(v.values);
  return out;
}

// Fixed judgment for every pair; counts calls.
class ConstantNli final : public NliModel {
 public:
  explicit ConstantNli(NliJudgment j) : j_(j) {}
  NliJudgment judge(const NliKey&, std::string_view, std::string_view) const override {
    ++calls;
    return j_;
  }
  Json metadata() const override { return {}; }
  mutable std::atomic<int> calls{0};

 private:
  NliJudgment j_;
};

}  // namespace

TEST_CASE("semantic invariance of two points") {
  const std::vector<EmbeddingVector> v = {{{0.0, 0.0}}, {{2.0, 2.0}}};
  CHECK(semantic_invariance(v) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<EmbeddingVector> same = {{{0.3, -1.0}}, {{0.3, -1.0}}, {{0.3, -1.0}}};
  CHECK(semantic_invariance(same) == 0.0);
}

TEST_CASE("semantic invariance matches the second-moment oracle") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto vs = random_vectors(rng, 2 + rng() % 19, 1 + rng() % 16);
    CHECK(semantic_invariance(vs) == doctest::Approx(oracle::variance_mean(raw(vs))).epsilon(1e-9));
  }
}

TEST_CASE("semantic invariance scales quadratically and ignores translation and order") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    auto vs = random_vectors(rng, 8, 5);
    const double base = semantic_invariance(vs);
    CHECK(base >= 0.0);

    auto scaled = vs;
    for (auto& v : scaled) for (auto& x : v.values) x *= 3.0;
    CHECK(semantic_invariance(scaled) == doctest::Approx(9.0 * base).epsilon(1e-9));

    auto shifted = vs;
    for (auto& v : shifted) for (std::size_t d = 0; d < v.values.size(); ++d) v.values[d] += 10.0 + d;
    CHECK(semantic_invariance(shifted) == doctest::Approx(base).epsilon(1e-9));

    std::shuffle(vs.begin(), vs.end(), rng);
    CHECK(semantic_invariance(vs) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("semantic invariance rejects bad input") {
  CHECK_THROWS_AS(semantic_invariance(std::vector<EmbeddingVector>{}), ArgumentError);
  const std::vector<EmbeddingVector> ragged = {{{0.0, 1.0}}, {{1.0}}};
  CHECK_THROWS_AS(semantic_invariance(ragged), ArgumentError);
}

TEST_CASE("representative summary is the candidate nearest the mean") {
  const std::vector<EmbeddingVector> v = {{{0.0}}, {{1.0}}, {{2.0}}};
  CHECK(representative_summary(v) == 1);
  const std::vector<EmbeddingVector> tie = {{{0.0}}, {{2.0}}};
  CHECK(representative_summary(tie) == 0);
}

TEST_CASE("coverage row for a single candidate noun") {
  CoverageInputs in;
  in.dialogue_nouns = {{"cake", false, 1, {{0.0}}}, {"party", false, 1, {{1.0}}}};
  in.candidate_nouns = {{{{0.0}}}};
  const auto m = coverage_matrix(in);
  REQUIRE(m.has_value());
  CHECK(m->rows() == 1);
  CHECK(m->cols() == 2);
  CHECK((*m)(0, 0) == 0.0);
  CHECK((*m)(0, 1) == 1.0);
}

TEST_CASE("coverage weights by occurrence and caps proper nouns") {
  CoverageInputs in;
  in.dialogue_nouns = {{"cake", false, 3, {{1.0}}}, {"tom", true, 4, {{3.0}}}};
  in.candidate_nouns = {{{{0.0}}}, {}};
  const auto m = coverage_matrix(in, 2.5);
  REQUIRE(m.has_value());
  CHECK((*m)(0, 0) == 3.0);
  CHECK((*m)(0, 1) == 3.0);
  CHECK((*m)(1, 0) == 2.5);
  CHECK((*m)(1, 1) == 2.5);
  CHECK(m->kind() == MatrixKind::kCoverage);
}

TEST_CASE("coverage is undefined without dialogue nouns") {
  CoverageInputs in;
  in.candidate_nouns = {{{{0.0}}}};
  CHECK_FALSE(coverage_matrix(in).has_value());
}

TEST_CASE("coverage matches a brute-force loop and stays bounded") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    CoverageInputs in;
    const std::size_t d = 1 + rng() % 6;
    for (std::size_t j = 0, p = 1 + rng() % 7; j < p; ++j) {
      in.dialogue_nouns.push_back({"n" + std::to_string(j), rng() % 3 == 0, 1 + rng() % 4,
                                   random_vectors(rng, 1, d)[0]});
    }
    for (std::size_t i = 0, k = 1 + rng() % 6; i < k; ++i) {
      in.candidate_nouns.push_back(random_vectors(rng, rng() % 5, d));
    }
    const auto m = coverage_matrix(in, 2.0);
    REQUIRE(m.has_value());
    for (std::size_t i = 0; i < m->rows(); ++i) {
      for (std::size_t j = 0; j < m->cols(); ++j) {
        const auto& noun = in.dialogue_nouns[j];
        const double w = noun.is_proper ? 1.0 : static_cast<double>(noun.occurrences);
        double expected = 2.0;
        if (!in.candidate_nouns[i].empty()) {
          expected = 1e300;
          for (const auto& c : in.candidate_nouns[i]) {
            double s = 0.0;
            for (std::size_t x = 0; x < d; ++x) s += std::pow(noun.embedding.values[x] - c.values[x], 2);
            expected = std::min(expected, std::sqrt(s));
          }
          expected *= w;
          double far = 0.0;
          for (const auto& c : in.candidate_nouns[i]) far = std::max(far, euclidean_distance(noun.embedding, c));
          CHECK((*m)(i, j) <= far * w + 1e-12);
        }
        CHECK((*m)(i, j) >= 0.0);
        CHECK((*m)(i, j) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("faithfulness row under full entailment") {
  FaithfulnessInputs in;
  in.dialogue_id = "d";
  in.dialogue_sentences = {{"Tom bought cake", 2}, {"Anna came", 1}};
  in.candidate_sentences = {{"Tom bought cake"}};
  const ConstantNli nli({1.0, 0.0});
  const auto m = faithfulness_matrix(in, nli);
  CHECK(m(0, 0) == -2.0);
  CHECK(m(0, 1) == -1.0);
  CHECK(m.kind() == MatrixKind::kFaithfulness);
}

TEST_CASE("faithfulness takes the most entailed summary sentence") {
  SyntheticNli nli;
  FaithfulnessInputs in;
  in.dialogue_id = "d";
  in.dialogue_sentences = {{"the cat sat", 1}};
  in.candidate_sentences = {{"dogs bark", "the cat sat"}};
  CHECK(faithfulness_matrix(in, nli)(0, 0) == -1.0);
}

TEST_CASE("noun-less sentences and empty summaries keep the penalty") {
  FaithfulnessInputs in;
  in.dialogue_id = "d";
  in.dialogue_sentences = {{"ok", 0}, {"Tom and Anna", 2}, {"the party", 1}};
  in.candidate_sentences = {{"x"}, {}};
  const ConstantNli nli({0.2, 0.7});
  const auto m = faithfulness_matrix(in, nli);
  const double pen = faithfulness_penalty(in.dialogue_sentences);
  CHECK(pen == 2.0);
  CHECK(m(0, 0) == pen);
  CHECK(m(0, 1) == doctest::Approx(1.0));
  CHECK(m(0, 2) == doctest::Approx(0.5));
  for (std::size_t a = 0; a < 3; ++a) CHECK(m(1, a) == pen);
  // Only sentences with nouns reach the NLI model.
  CHECK(nli.calls == 2);

  PenaltyConfig cfg;
  cfg.faithfulness = 7.5;
  CHECK(faithfulness_matrix(in, nli, cfg)(0, 0) == 7.5);

  const std::vector<DialogueSentence> none = {{"ok", 0}};
  CHECK(faithfulness_penalty(none) == 1.0);
}

TEST_CASE("penalty cells dominate every activated cell") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    FaithfulnessInputs in;
    in.dialogue_id = "d";
    for (std::size_t a = 0, h = 1 + rng() % 6; a < h; ++a) in.dialogue_sentences.push_back({"s", rng() % 4});
    for (std::size_t i = 0, k = 1 + rng() % 5; i < k; ++i) {
      in.candidate_sentences.push_back(std::vector<std::string>(rng() % 3, "c"));
    }
    const double p = u(rng);
    const ConstantNli nli({p, 1.0 - p});
    const auto m = faithfulness_matrix(in, nli);
    const double pen = faithfulness_penalty(in.dialogue_sentences);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t a = 0; a < m.cols(); ++a) {
        CHECK(std::isfinite(m(i, a)));
        CHECK(m(i, a) <= pen);
        if (in.dialogue_sentences[a].noun_weight == 0 || in.candidate_sentences[i].empty()) {
          CHECK(m(i, a) == pen);
        }
      }
    }
  }
}

TEST_CASE("quality matrix row permutation") {
  QualityMatrix m({{1, 2}, {3, 4}, {5, 6}}, MatrixKind::kCoverage);
  const std::vector<std::size_t> perm = {2, 0, 1};
  const auto p = m.permute_rows(perm);
  CHECK(p(0, 0) == 5);
  CHECK(p(1, 1) == 2);
  CHECK(p(2, 0) == 3);
  CHECK_THROWS_AS(QualityMatrix({{1, 2}, {3}}, MatrixKind::kCoverage), ArgumentError);
}
