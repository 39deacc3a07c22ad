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

#include <gtest/gtest.h>

#include "honest/baselines.hpp"
#include "support/mock_server.hpp"

namespace honest {
namespace {

using testing::chat_reply;
using testing::MockReply;
using testing::MockServer;
using testing::yes_no_reply;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an honest::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(AvgProbTest, Examples) {
  EXPECT_DOUBLE_EQ(avg_prob(std::vector<TokenProbs>{{0.5, 1.0}}), 0.75);
  EXPECT_DOUBLE_EQ(avg_prob(std::vector<TokenProbs>{{1.0}, {0.5}}), 0.75);
  EXPECT_DOUBLE_EQ(avg_prob(std::vector<TokenProbs>{{1.0, 1.0, 1.0}, {0.0 + 0.5}}), 0.875);
  EXPECT_EQ(code_of([] { avg_prob(std::vector<TokenProbs>{{0.5}, {}}); }), ErrorCode::kMissingLogprobs);
  EXPECT_EQ(code_of([] { avg_prob(std::vector<TokenProbs>{}); }), ErrorCode::kMissingLogprobs);
}

TEST(ProductProbTest, Examples) {
  EXPECT_DOUBLE_EQ(product_prob(std::vector<TokenProbs>{{0.5, 0.5}}), 0.25);
  EXPECT_DOUBLE_EQ(product_prob(std::vector<TokenProbs>{{0.5}, {0.25}}), 0.375);
  const double long_product = product_prob(std::vector<TokenProbs>{TokenProbs(200, 0.9)});
  EXPECT_GT(long_product, 0.0);
  EXPECT_NEAR(long_product, std::exp(200 * std::log(0.9)), 1e-20);
  EXPECT_NEAR(long_product / std::exp(200 * std::log(0.9)), 1.0, 1e-9);
  EXPECT_EQ(code_of([] { product_prob(std::vector<TokenProbs>{{}}); }), ErrorCode::kMissingLogprobs);
}

TEST(TokenProbabilityProperties, ProductNeverExceedsMeanAndBothInRange) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> prob(1e-6, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    TokenProbs record(1 + trial % 30);
    for (auto& p : record) p = prob(rng);
    const std::vector<TokenProbs> one{record};
    const double product = product_prob(one);
    const double mean = avg_prob(one);
    EXPECT_LE(product, mean + 1e-15);
    EXPECT_GE(product, 0.0);
    EXPECT_LE(mean, 1.0);
  }
}

TEST(TokenProbabilityProperties, ReadsFromRecordsAndPrograms) {
  GenerationRecord record;
  record.token_probs = {0.5, 1.0};
  EXPECT_EQ(token_probs_of(std::vector<GenerationRecord>{record}).at(0), (TokenProbs{0.5, 1.0}));
  Program program{"x", Language::kPython, ProgramOrigin{0, 1.0, TokenProbs{0.25}, false}};
  Program bare{"y", Language::kPython, std::nullopt};
  const auto probs = token_probs_of(std::vector<Program>{program, bare});
  EXPECT_EQ(probs[0], TokenProbs{0.25});
  EXPECT_TRUE(probs[1].empty());
}

SamplingConfig config_for(const MockServer& server) {
  SamplingConfig config;
  config.endpoint = server.endpoint();
  config.model = "m";
  config.api_key = "k";
  config.retry.initial_backoff = std::chrono::milliseconds(5);
  return config;
}

std::vector<Program> programs(std::initializer_list<const char*> sources) {
  std::vector<Program> out;
  for (const char* s : sources) out.push_back({s, Language::kPython, std::nullopt});
  return out;
}

TEST(SelfAskTest, CodeJudgmentMeans) {
  MockServer server;
  server.on_chat([](const json& body) {
    const std::string prompt = body["messages"].back()["content"];
    if (prompt.find("low_confidence") != std::string::npos) return MockReply{200, yes_no_reply({{"Yes", 0.2}})};
    if (prompt.find("high_confidence") != std::string::npos) return MockReply{200, yes_no_reply({{"Yes", 0.6}})};
    return MockReply{200, yes_no_reply({{"Yes", 0.8}, {"No", 0.2}})};
  });
  LlmClient client(config_for(server), [](const std::string&) {});
  EXPECT_NEAR(self_ask_code(client, "req", programs({"a = 1", "b = 2", "c = 3"})), 0.8, 1e-9);
  EXPECT_NEAR(self_ask_code(client, "req", programs({"low_confidence()", "high_confidence()"})), 0.4, 1e-9);
  EXPECT_EQ(code_of([&] { self_ask_code(client, "req", std::vector<Program>{}); }), ErrorCode::kEmptyInput);
  const auto prompt = server.bodies().front()["messages"].back()["content"].get<std::string>();
  EXPECT_NE(prompt.find("req"), std::string::npos);
}

TEST(SelfAskTest, RequirementJudgment) {
  MockServer server;
  std::atomic<int> calls{0};
  server.on_chat([&](const json& body) {
    const std::string prompt = body["messages"].back()["content"];
    EXPECT_NE(prompt.find("Sort a list"), std::string::npos);
    switch (calls++) {
      case 0: return MockReply{200, yes_no_reply({{"Yes", 0.9}})};
      case 1: return MockReply{200, yes_no_reply({{"No", 0.6}, {"Maybe", 0.3}})};
      default: {
        json reply = chat_reply("Yes");
        reply["choices"][0]["logprobs"] = nullptr;
        return MockReply{200, reply};
      }
    }
  });
  LlmClient client(config_for(server), [](const std::string&) {});
  EXPECT_NEAR(self_ask_requirement(client, "Sort a list", Language::kPython), 0.9, 1e-9);
  EXPECT_EQ(self_ask_requirement(client, "Sort a list", Language::kPython), 0.0);
  EXPECT_EQ(code_of([&] { self_ask_requirement(client, "Sort a list", Language::kPython); }),
            ErrorCode::kLogprobsUnavailable);
}

TEST(KnnVoteTest, Examples) {
  const std::vector<double> scores{0.9, 0.8, 0.7, 0.1};
  const std::vector<Outcome> labels{Outcome::kPassed, Outcome::kPassed, Outcome::kFailed, Outcome::kPassed};
  EXPECT_NEAR(knn_vote(scores, labels, 3), 0.6667, 5e-5);
  EXPECT_NEAR(knn_vote(scores, labels, 3), 2.0 / 3.0, 1e-12);
  const std::vector<Outcome> failed_first{Outcome::kFailed, Outcome::kPassed, Outcome::kPassed, Outcome::kPassed};
  EXPECT_EQ(knn_vote(scores, failed_first, 1), 0.0);
}

TEST(KnnVoteTest, TiesKeepInsertionOrderAndKIsClamped) {
  const std::vector<double> scores{0.5, 0.5, 0.5};
  const std::vector<Outcome> labels{Outcome::kFailed, Outcome::kPassed, Outcome::kPassed};
  EXPECT_EQ(knn_vote(scores, labels, 1), 0.0);
  EXPECT_DOUBLE_EQ(knn_vote(scores, labels, 50), 2.0 / 3.0);
  EXPECT_EQ(knn_vote(scores, labels, 1, 0), 1.0);
  EXPECT_EQ(code_of([&] { knn_vote(std::vector<double>{}, std::vector<Outcome>{}, 1); }), ErrorCode::kEmptyCorpus);
}

TEST(Bm25Test, HandEvaluatedFormula) {
  Bm25Index index;
  index.add("d0", {"a", "b", "c"}, Outcome::kPassed);
  // N = 1, df = 1: idf = ln(1 + 0.5 / 1.5); tf = 1 and len = avglen, so each term scores idf.
  const double expected = 3.0 * std::log(4.0 / 3.0);
  EXPECT_NEAR(index.score({"a", "b", "c"}, 0), expected, 1e-12);
  EXPECT_NEAR(index.score({"a", "b", "c"}, 0), 0.8630462, 1e-7);
  EXPECT_EQ(index.score({"zzz"}, 0), 0.0);
  EXPECT_EQ(index.score({}, 0), 0.0);
  EXPECT_EQ(code_of([&] { index.score({"a"}, 1); }), ErrorCode::kUnknownDocument);
}

double oracle_bm25(const std::vector<std::vector<std::string>>& docs, const std::vector<std::string>& query,
                   std::size_t d, double k1 = 1.2, double b = 0.75) {
  double avg = 0.0;
  for (const auto& doc : docs) avg += static_cast<double>(doc.size());
  avg /= static_cast<double>(docs.size());
  double total = 0.0;
  for (const auto& term : query) {
    double df = 0.0;
    for (const auto& doc : docs) df += std::count(doc.begin(), doc.end(), term) > 0 ? 1.0 : 0.0;
    const double tf = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), term));
    if (tf == 0.0) continue;
    const double idf = std::log(1.0 + (static_cast<double>(docs.size()) - df + 0.5) / (df + 0.5));
    total += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * static_cast<double>(docs[d].size()) / avg));
  }
  return total;
}

TEST(Bm25Test, MatchesBruteForceOracleOnToyCorpus) {
  const std::vector<std::vector<std::string>> docs = {
      requirement_terms("Sort a list of integers in ascending order"),
      requirement_terms("Return the sum of a list of integers"),
      requirement_terms("Reverse a string and return it"),
      requirement_terms("Check whether a string is a palindrome"),
      requirement_terms("Count the words in a sentence, ignoring case"),
  };
  Bm25Index index;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    index.add("d" + std::to_string(d), docs[d], d % 2 ? Outcome::kFailed : Outcome::kPassed);
  }
  EXPECT_TRUE(index.frequencies_consistent());
  EXPECT_EQ(index.doc_freq("a"), 5u);
  EXPECT_EQ(index.doc_freq("string"), 2u);
  for (const auto* q : {"sum of integers", "string palindrome", "a list a list", "nothing matches"}) {
    const auto query = requirement_terms(q);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      EXPECT_NEAR(index.score(query, d), oracle_bm25(docs, query, d), 1e-12) << q << " doc " << d;
    }
  }
  const std::string stored = "Reverse a string and return it";
  const auto scores = bm25_scores(index, requirement_terms(stored));
  EXPECT_EQ(std::max_element(scores.begin(), scores.end()) - scores.begin(), 2);
  EXPECT_EQ(knn_confidence(stored, index, 1), 1.0);
}

TEST(Bm25Test, RequirementTerms) {
  EXPECT_EQ(requirement_terms("Sort, the LIST!  fast2"), (std::vector<std::string>{"sort", "the", "list", "fast2"}));
  EXPECT_TRUE(requirement_terms("  ,. ").empty());
}

TEST(KnnConfidenceTest, EmptyCorpora) {
  Bm25Index index;
  EXPECT_EQ(code_of([&] { knn_confidence("x", index, 1); }), ErrorCode::kEmptyCorpus);
  EmbeddingCorpus corpus;
  EXPECT_EQ(code_of([&] { knn_confidence(EmbeddingVector{{1.0}}, corpus, 1); }), ErrorCode::kEmptyCorpus);
}

TEST(KnnConfidenceTest, EmbeddingMetricAndTailDuplication) {
  LocalHashedProvider provider(128);
  EmbeddingCorpus corpus;
  const std::vector<std::pair<std::string, Outcome>> reqs = {
      {"sort a list of numbers", Outcome::kPassed},
      {"sort a list of strings", Outcome::kPassed},
      {"parse a date string", Outcome::kFailed},
      {"open a network socket", Outcome::kFailed},
      {"compute a matrix inverse", Outcome::kFailed},
  };
  for (const auto& [text, label] : reqs) corpus.add(text, provider.embed_text(text), label);
  const auto query = provider.embed_text("sort a list of numbers");
  EXPECT_EQ(knn_confidence(query, corpus, 1), 1.0);
  const double base = knn_confidence(query, corpus, 2);
  EXPECT_EQ(base, 1.0);

  const auto scores = embedding_scores(corpus, query);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  EmbeddingCorpus duplicated = corpus;
  for (std::size_t r = 2; r < order.size(); ++r) {
    duplicated.add(corpus.ids[order[r]] + "-copy", corpus.vectors[order[r]], corpus.labels[order[r]]);
  }
  EXPECT_EQ(knn_confidence(query, duplicated, 2), base);
}

TEST(KnnConfidenceTest, Bm25TailDuplicationWithDisjointVocabulary) {
  Bm25Index index;
  index.add("a", requirement_terms("sort numbers quickly"), Outcome::kPassed);
  index.add("b", requirement_terms("sort strings"), Outcome::kFailed);
  index.add("c", requirement_terms("open socket"), Outcome::kFailed);
  const double base = knn_confidence("sort numbers", index, 2);
  index.add("c2", requirement_terms("open socket"), Outcome::kFailed);
  index.add("c3", requirement_terms("open socket"), Outcome::kFailed);
  EXPECT_EQ(knn_confidence("sort numbers", index, 2), base);
}

TEST(KnnTuningTest, LeaveOneOutPicksSmallestBestK) {
  // Two tight clusters with matching labels: k = 1 is already perfect.
  const std::vector<Outcome> labels{Outcome::kPassed, Outcome::kPassed, Outcome::kPassed,
                                    Outcome::kFailed, Outcome::kFailed, Outcome::kFailed};
  std::vector<std::vector<double>> pairwise(6, std::vector<double>(6));
  for (std::size_t q = 0; q < 6; ++q) {
    for (std::size_t d = 0; d < 6; ++d) pairwise[q][d] = (q < 3) == (d < 3) ? 0.9 - 0.01 * d : 0.1;
  }
  const auto tuned = tune_knn_k(pairwise, labels);
  EXPECT_EQ(tuned.k, 1);
  EXPECT_EQ(tuned.train_auroc, 1.0);
}

}  // namespace
}  // namespace honest
