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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "honest/dataflow.hpp"
#include "honest/similarity.hpp"
#include "honest/subtrees.hpp"
#include "honest/tokenize.hpp"
#include "support/oracles.hpp"

namespace honest {
namespace {

TokenSequence seq(std::vector<std::string> tokens) { return {std::move(tokens)}; }
Program python(std::string source) { return {std::move(source), Language::kPython, std::nullopt}; }
SubtreeBag bag_of(const std::string& source) { return extract_subtrees(parse_cst(python(source))); }

TEST(SimTextTest, Examples) {
  EXPECT_DOUBLE_EQ(sim_text(seq({"a", "b", "c"}), seq({"a", "b", "c"})), 1.0);
  const double v = sim_text(seq({"a", "b", "c", "d", "e"}), seq({"a", "b", "c", "d", "f"}));
  EXPECT_NEAR(v, 0.66874, 5e-6);
  EXPECT_NEAR(v, std::pow(0.2, 0.25), 1e-12);
  EXPECT_EQ(sim_text(seq({"x", "=", "1"}), seq({"y", "+", "2"})), 0.0);
}

TEST(SimTextTest, EmptyAndShortSequences) {
  EXPECT_EQ(sim_text(seq({}), seq({})), 1.0);
  EXPECT_EQ(sim_text(seq({"a"}), seq({})), 0.0);
  EXPECT_EQ(sim_text(seq({}), seq({"a"})), 0.0);
  EXPECT_DOUBLE_EQ(sim_text(seq({"a"}), seq({"a"})), 1.0);
  EXPECT_DOUBLE_EQ(sim_text(seq({"a", "b"}), seq({"a", "b"})), 1.0);
  // Only unigrams and bigrams exist in j; overlaps 2/2 and 1/1.
  EXPECT_DOUBLE_EQ(sim_text(seq({"b", "a", "b"}), seq({"a", "b"})), 1.0);
}

TEST(SimTextTest, ClipsRepeatedTokens) {
  // j = [a, a]; i has a single 'a': unigram overlap 1/2, bigram overlap 0.
  EXPECT_EQ(sim_text(seq({"a"}), seq({"a", "a"})), 0.0);
  // Surplus occurrences in i are clipped to j's counts, so the ratios stay at 1.
  EXPECT_DOUBLE_EQ(sim_text(seq({"a", "b", "a", "b", "a"}), seq({"a", "b", "a"})), 1.0);
  EXPECT_DOUBLE_EQ(sim_text(seq({"a", "a", "a"}), seq({"a", "a"})), 1.0);
}

std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t max_len, int alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  std::vector<std::string> out(len(rng));
  for (auto& t : out) t = std::string(1, static_cast<char>('a' + sym(rng)));
  return out;
}

TEST(SimTextTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    // Small alphabets so that higher-order overlaps actually occur.
    const int alphabet = 2 + trial % 4;
    auto i = random_tokens(rng, 40, alphabet);
    auto j = random_tokens(rng, 40, alphabet);
    if (trial % 5 == 0 && !i.empty()) j = i;
    EXPECT_NEAR(sim_text(seq(i), seq(j)), oracle::text_similarity(i, j), 1e-9) << "trial " << trial;
  }
}

TEST(SimTextTest, IsAsymmetric) {
  const auto i = seq({"a", "b", "c"});
  const auto j = seq({"a", "b", "c", "a", "b", "c", "d"});
  EXPECT_DOUBLE_EQ(sim_text(j, i), 1.0);
  EXPECT_LT(sim_text(i, j), 1.0);
}

TEST(SimTextTest, RangeOverRandomPairs) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const double v = sim_text(seq(random_tokens(rng, 30, 3)), seq(random_tokens(rng, 30, 3)));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(SimSyntaxTest, Examples) {
  EXPECT_DOUBLE_EQ(sim_syntax(bag_of("x = 1"), bag_of("x = 1")), 1.0);
  // Literal values are abstracted to their node kind.
  EXPECT_DOUBLE_EQ(sim_syntax(bag_of("x = 1"), bag_of("x = 2")), 1.0);
  SubtreeBag a, b;
  a.entries["(p q)"] = 1;
  b.entries["(r s)"] = 2;
  EXPECT_EQ(sim_syntax(a, b), 0.0);
}

TEST(SimSyntaxTest, HandEnumeratedBags) {
  // x = 1: {(assignment identifier "=" integer), (expression_statement (...)), (module ...)}
  // x = y: shares only the module fingerprint of three.
  EXPECT_DOUBLE_EQ(sim_syntax(bag_of("x = 1"), bag_of("x = y")), 1.0 / 3.0);
  // Doubling the statement doubles the two inner fingerprints and changes the root.
  EXPECT_DOUBLE_EQ(sim_syntax(bag_of("x = 1"), bag_of("x = 1\nx = 1\n")), 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(sim_syntax(bag_of("x = 1\nx = 1\n"), bag_of("x = 1")), 2.0 / 3.0);
}

TEST(SimSyntaxTest, EmptyConventions) {
  SubtreeBag empty, one;
  one.entries["(a b)"] = 1;
  EXPECT_EQ(sim_syntax(empty, empty), 1.0);
  EXPECT_EQ(sim_syntax(one, empty), 0.0);
  EXPECT_EQ(sim_syntax(empty, one), 0.0);
}

TEST(SimDataflowTest, Examples) {
  DataflowGraph ab, ac;
  ab.edges[{"a", "b"}] = 1;
  ac.edges[{"a", "c"}] = 1;
  EXPECT_DOUBLE_EQ(sim_dataflow(ab, ab), 1.0);
  EXPECT_EQ(sim_dataflow(ab, ac), 0.0);
  const auto pass1 = extract_dataflow(python("pass\n"));
  const auto pass2 = extract_dataflow(python("pass\n"));
  ASSERT_TRUE(pass1.empty());
  EXPECT_EQ(sim_dataflow(pass1, pass2), 1.0);
  EXPECT_EQ(sim_dataflow(ab, pass1), 0.0);
}

TEST(SimDataflowTest, ClippedOverlap) {
  DataflowGraph i, j;
  i.edges[{"a", "b"}] = 1;
  j.edges[{"a", "b"}] = 3;
  j.edges[{"b", "c"}] = 1;
  EXPECT_DOUBLE_EQ(sim_dataflow(i, j), 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(sim_dataflow(j, i), 1.0);
}

TEST(SimEmbedTest, Examples) {
  EXPECT_DOUBLE_EQ(sim_embed({{0.3, 0.4}}, {{0.3, 0.4}}), 1.0);
  EXPECT_DOUBLE_EQ(sim_embed({{1, 0}}, {{0, 1}}), 0.0);
  EXPECT_NEAR(sim_embed({{3, 4}}, {{4, 3}}), 0.96, 1e-12);
}

TEST(SimHybridTest, Examples) {
  const SimilarityWeights skewed{0.1, 0.2, 0.3, 0.4};
  EXPECT_NEAR(sim_hybrid({1, 1, 1, 1}, skewed), 1.0, 1e-12);
  EXPECT_NEAR(sim_hybrid({1, 1, 1, 1}, SimilarityWeights::uniform()), 1.0, 1e-12);
  EXPECT_NEAR(sim_hybrid({0.8, 0.6, 0.4, 0.2}, SimilarityWeights::uniform()), 0.5, 1e-12);
  EXPECT_NEAR(sim_hybrid({0.3, 0.9, 0.9, 0.9}, {1, 0, 0, 0}), 0.3, 1e-12);
}

TEST(SimHybridTest, RejectsOutOfRangeComponents) {
  for (const ModalityScores bad : {ModalityScores{1.1, 0, 0, 0}, ModalityScores{0, -0.1, 0, 0},
                                   ModalityScores{0, 0, NAN, 0}, ModalityScores{0, 0, 0, 2}}) {
    try {
      sim_hybrid(bad, SimilarityWeights::uniform());
      ADD_FAILURE() << "expected ComponentOutOfRange";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kComponentOutOfRange);
    }
  }
}

TEST(SimilarityWeightsTest, RejectsWeightsOffTheSimplex) {
  for (const SimilarityWeights bad : {SimilarityWeights{0.5, 0.5, 0.5, 0.0}, SimilarityWeights{-0.1, 0.6, 0.25, 0.25},
                                      SimilarityWeights{0.2, 0.2, 0.2, 0.2}}) {
    try {
      bad.validate();
      ADD_FAILURE() << "expected InvalidWeights";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidWeights);
    }
  }
}

TEST(SimHybridTest, MonotoneInEachComponentAndEqualsWeightedSum) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double raw[4] = {unit(rng), unit(rng), unit(rng), unit(rng)};
    const double total = raw[0] + raw[1] + raw[2] + raw[3];
    SimilarityWeights w{raw[0] / total, raw[1] / total, raw[2] / total, 0.0};
    w.delta = 1.0 - w.alpha - w.beta - w.gamma;
    ModalityScores c{unit(rng), unit(rng), unit(rng), unit(rng)};
    const double base = sim_hybrid(c, w);
    EXPECT_NEAR(base, w.alpha * c.text + w.beta * c.syntax + w.gamma * c.dataflow + w.delta * c.embedding, 1e-9);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0 + 1e-12);
    ModalityScores up = c;
    up.text = std::min(1.0, c.text + unit(rng) * (1.0 - c.text));
    up.syntax = std::min(1.0, c.syntax + 0.01);
    EXPECT_GE(sim_hybrid(up, w), base);
  }
}

TEST(SimilarityProperties, SelfSimilarityOnRealPrograms) {
  for (const char* source : {"x = 1", "def f(a):\n    return a + 1\n", "for i in range(3):\n    print(i)\n"}) {
    const auto p = python(source);
    const auto tree = parse_cst(p);
    EXPECT_DOUBLE_EQ(sim_text(tokenize(tree), tokenize(tree)), 1.0);
    EXPECT_DOUBLE_EQ(sim_syntax(extract_subtrees(tree), extract_subtrees(tree)), 1.0);
    const auto dfg = extract_dataflow(tree);
    EXPECT_DOUBLE_EQ(sim_dataflow(dfg, dfg), 1.0);
  }
}

TEST(SimHybridTest, StaysInRangeForWeightsSummingToOneWithinRounding) {
  const SimilarityWeights w{0.1, 0.2, 0.3, 0.4 + 5e-10};
  w.validate();
  EXPECT_LE(sim_hybrid({1.0, 1.0, 1.0, 1.0}, w), 1.0);
}

}  // namespace
}  // namespace honest
