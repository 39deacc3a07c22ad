// Copyright 2026 The honest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "honest/confidence.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace honest {
namespace {

using synthetic::python;

class CountingProvider : public EmbeddingProvider {
 public:
  EmbeddingVector embed(const Program& program) override {
    ++calls;
    return inner.embed(program);
  }
  EmbeddingVector embed_text(std::string_view text) override { return inner.embed_text(text); }

  std::atomic<int> calls{0};
  LocalHashedProvider inner{256};
};

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(HONEST_TEST_DATA_DIR) + "/golden/python/" + name);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an honest::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(EstimateConfidenceTest, IdenticalProgramsScoreOne) {
  SampleSet set{"r", "req", std::vector<Program>(5, python("def f(a):\n    return a * 2\n"))};
  CountingProvider provider;
  const auto report = estimate_confidence(set, SimilarityWeights::uniform(), provider);
  EXPECT_NEAR(report.confidence, 1.0, 1e-9);
  EXPECT_EQ(report.n, 5u);
  EXPECT_EQ(provider.calls.load(), 5);
}

TEST(EstimateConfidenceTest, StubbedPairMean) {
  const auto report = build_report("r", 2, SimilarityWeights::uniform(), [](std::size_t i, std::size_t) {
    const double v = i == 0 ? 0.7 : 0.5;
    return ModalityScores{v, v, v, v};
  });
  EXPECT_NEAR(report.at(0, 1).hybrid, 0.7, 1e-12);
  EXPECT_NEAR(report.at(1, 0).hybrid, 0.5, 1e-12);
  EXPECT_NEAR(report.confidence, 0.6, 1e-12);
}

TEST(EstimateConfidenceTest, ThreeGoldenProgramsMatchDirectEnumeration) {
  SampleSet set{"g", "req", {python(read_golden("p03_function.py")), python(read_golden("p04_loop.py")),
                         python(read_golden("p07_comprehension.py"))}};
  ASSERT_FALSE(set.programs[0].source.empty());
  const SimilarityWeights w{0.1, 0.2, 0.3, 0.4};
  LocalHashedProvider provider(256);
  const auto report = estimate_confidence(set, w, provider);

  // Oracle: each ordered pair recomputed from scratch, text via brute force.
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const auto& pi = set.programs[i];
      const auto& pj = set.programs[j];
      const double text = oracle::text_similarity(tokenize(pi).tokens, tokenize(pj).tokens);
      const double syntax = sim_syntax(extract_subtrees(parse_cst(pi)), extract_subtrees(parse_cst(pj)));
      const double dataflow = sim_dataflow(extract_dataflow(pi), extract_dataflow(pj));
      const double embed = cosine(provider.embed(pi), provider.embed(pj));
      const double hybrid = w.alpha * text + w.beta * syntax + w.gamma * dataflow + w.delta * embed;
      EXPECT_NEAR(report.at(i, j).hybrid, hybrid, 1e-9);
      sum += hybrid;
    }
  }
  EXPECT_NEAR(report.confidence, sum / 6.0, 1e-9);
}

TEST(EstimateConfidenceTest, PermutationInvariant) {
  std::mt19937_64 rng(11);
  auto set = synthetic::failed_set("perm", 6, rng);
  LocalHashedProvider provider(256);
  const auto base = estimate_confidence(set, SimilarityWeights::uniform(), provider);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(set.programs.begin(), set.programs.end(), rng);
    EXPECT_NEAR(estimate_confidence(set, SimilarityWeights::uniform(), provider).confidence, base.confidence, 1e-9);
  }
}

TEST(EstimateConfidenceTest, ReportRecomputesExactlyAndStaysInRange) {
  std::mt19937_64 rng(3);
  LocalHashedProvider provider(256);
  for (int trial = 0; trial < 6; ++trial) {
    const auto set = trial % 2 ? synthetic::passed_set("p", 4, rng) : synthetic::failed_set("f", 4, rng);
    const auto report = estimate_confidence(set, {0.4, 0.3, 0.2, 0.1}, provider);
    EXPECT_EQ(report.recompute_confidence(), report.confidence);
    EXPECT_GE(report.confidence, 0.0);
    EXPECT_LE(report.confidence, 1.0);
    EXPECT_NEAR(mix(report.mean_scores(), report.weights), report.confidence, 1e-12);
  }
}

TEST(EstimateConfidenceTest, WorkerCountDoesNotChangeResult) {
  std::mt19937_64 rng(8);
  const auto set = synthetic::failed_set("w", 8, rng);
  LocalHashedProvider provider(256);
  EstimateOptions one;
  one.workers = 1;
  EstimateOptions many;
  many.workers = 8;
  EXPECT_EQ(estimate_confidence(set, SimilarityWeights::uniform(), provider, one).confidence,
            estimate_confidence(set, SimilarityWeights::uniform(), provider, many).confidence);
}

TEST(EstimateConfidenceTest, Preconditions) {
  LocalHashedProvider provider(64);
  SampleSet one{"r", "q", {python("x = 1")}};
  EXPECT_EQ(code_of([&] { estimate_confidence(one, SimilarityWeights::uniform(), provider); }),
            ErrorCode::kTooFewSamples);
  SampleSet mixed{"r", "q", {python("x = 1"), Program{"class A {}", Language::kJava, std::nullopt}}};
  EXPECT_EQ(code_of([&] { estimate_confidence(mixed, SimilarityWeights::uniform(), provider); }),
            ErrorCode::kInvalidArgument);
  SampleSet two{"r", "q", {python("x = 1"), python("y = 2")}};
  EXPECT_EQ(code_of([&] { estimate_confidence(two, {0.5, 0.5, 0.5, 0.5}, provider); }), ErrorCode::kInvalidWeights);
}

TEST(EstimateConfidenceTest, PassedSetsScoreAboveFailedSets) {
  const auto data = synthetic::separable_dataset(5, 5, 17);
  LocalHashedProvider provider(256);
  double min_passed = 1.0;
  double max_failed = 0.0;
  for (const auto& [samples, label] : data) {
    const double c = estimate_confidence(samples, SimilarityWeights::uniform(), provider).confidence;
    if (label == Outcome::kPassed) {
      min_passed = std::min(min_passed, c);
    } else {
      max_failed = std::max(max_failed, c);
    }
  }
  EXPECT_GT(min_passed, max_failed);
}

TEST(WeightGridTest, SimplexEnumeration) {
  const auto grid = weight_grid();
  EXPECT_EQ(grid.size(), 1771u);
  for (const auto& w : grid) EXPECT_NO_THROW(w.validate());
  EXPECT_EQ(grid.front(), (SimilarityWeights{0, 0, 0, 1}));
  EXPECT_EQ(grid.back(), (SimilarityWeights{1, 0, 0, 0}));
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const auto& a = grid[g - 1];
    const auto& b = grid[g];
    EXPECT_TRUE(std::tie(a.alpha, a.beta, a.gamma, a.delta) < std::tie(b.alpha, b.beta, b.gamma, b.delta));
  }
}

TEST(TuneWeightsTest, EmbeddingOnlySignalGivesDeltaOne) {
  const auto data = synthetic::one_modality_dataset(3, 40, 1);
  const auto result = tune_weights(data, 4);
  EXPECT_EQ(result.weights, (SimilarityWeights{0, 0, 0, 1}));
  EXPECT_EQ(result.train_auroc, 1.0);
  EXPECT_EQ(result.grid_points_evaluated, 1771);
}

TEST(TuneWeightsTest, ConcentratesOnEachSeparatingModality) {
  for (int modality = 0; modality < 4; ++modality) {
    const auto result = tune_weights(synthetic::one_modality_dataset(modality, 40, 100 + modality), 4);
    EXPECT_GE(synthetic::weight_of(result.weights, modality), 0.9) << "modality " << modality;
  }
}

TEST(TuneWeightsTest, SingleClassIsDegenerate) {
  std::vector<LabeledModalities> data = {{"a", {0.1, 0.2, 0.3, 0.4}, Outcome::kPassed},
                                         {"b", {0.4, 0.3, 0.2, 0.1}, Outcome::kPassed}};
  EXPECT_EQ(code_of([&] { tune_weights(data, 1); }), ErrorCode::kDegenerateLabels);
}

TEST(TuneWeightsTest, TiesGoToLexicographicallySmallestTuple) {
  // Every modality separates perfectly, so every grid point ties at AUROC 1.
  std::vector<LabeledModalities> data = {{"a", {0.9, 0.9, 0.9, 0.9}, Outcome::kPassed},
                                         {"b", {0.1, 0.1, 0.1, 0.1}, Outcome::kFailed}};
  EXPECT_EQ(tune_weights(data, 3).weights, (SimilarityWeights{0, 0, 0, 1}));
  // Text and syntax separate, the others invert: AUROC is 1 iff alpha + beta > 0.5,
  // and the smallest such tuple is (0, 0.55, 0, 0.45).
  data = {{"a", {0.9, 0.9, 0.1, 0.1}, Outcome::kPassed}, {"b", {0.1, 0.1, 0.9, 0.9}, Outcome::kFailed}};
  const auto w = tune_weights(data, 3).weights;
  EXPECT_EQ(w.alpha, 0.0);
  EXPECT_NEAR(w.beta, 0.55, 1e-12);
  EXPECT_EQ(w.gamma, 0.0);
  EXPECT_NEAR(w.delta, 0.45, 1e-12);
}

TEST(TuneWeightsTest, NeverWorseThanUniformAndDeterministicAcrossWorkers) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<LabeledModalities> data;
    for (int k = 0; k < 30; ++k) {
      data.push_back({std::to_string(k), {unit(rng), unit(rng), unit(rng), unit(rng)},
                      k % 3 == 0 ? Outcome::kPassed : Outcome::kFailed});
    }
    const auto result = tune_weights(data, 1);
    std::vector<ScoredSample> uniform;
    for (const auto& d : data) uniform.push_back({d.id, mix(d.mean_scores, SimilarityWeights::uniform()), d.label, {}, {}});
    EXPECT_GE(result.train_auroc, auroc(uniform));
    const auto parallel = tune_weights(data, 7);
    EXPECT_EQ(parallel.weights, result.weights);
    EXPECT_EQ(parallel.train_auroc, result.train_auroc);
  }
}

TEST(TuneWeightsTest, RawSampleSetsComputeEachSetOnce) {
  const auto data = synthetic::separable_dataset(3, 4, 5);
  std::vector<std::pair<SampleSet, Outcome>> train;
  for (const auto& d : data) train.emplace_back(d.samples, d.label);
  CountingProvider provider;
  const auto result = tune_weights(train, provider);
  EXPECT_EQ(provider.calls.load(), 6 * 4);
  EXPECT_EQ(result.train_auroc, 1.0);
}

}  // namespace
}  // namespace honest
