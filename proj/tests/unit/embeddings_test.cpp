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

#include <chrono>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "honest/embeddings.hpp"
#include "honest/parallel.hpp"
#include "support/mock_server.hpp"

namespace honest {
namespace {

using testing::MockReply;
using testing::MockServer;
using json = nlohmann::json;

Program python(std::string source) { return {std::move(source), Language::kPython, std::nullopt}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an honest::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(CosineTest, AnalyticValues) {
  EXPECT_DOUBLE_EQ(cosine({{1, 0}}, {{1, 0}}), 1.0);
  EXPECT_DOUBLE_EQ(cosine({{1, 0}}, {{0, 1}}), 0.0);
  EXPECT_NEAR(cosine({{1, 1}}, {{1, 0}}), 0.70710678, 1e-8);
  EXPECT_NEAR(cosine({{3, 4}}, {{4, 3}}), 0.96, 1e-12);
}

TEST(CosineTest, NegativeCosineClampsToZero) { EXPECT_EQ(cosine({{1, 0}}, {{-1, 0.1}}), 0.0); }

TEST(CosineTest, Errors) {
  EXPECT_EQ(code_of([] { cosine({{1, 0}}, {{1, 0, 0}}); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([] { cosine({{0, 0}}, {{1, 0}}); }), ErrorCode::kZeroVector);
}

TEST(CosineTest, SelfSimilarityScaleInvarianceAndRange) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 1 + trial % 17;
    EmbeddingVector a, b;
    for (std::size_t d = 0; d < dim; ++d) {
      a.values.push_back(normal(rng));
      b.values.push_back(normal(rng));
    }
    EXPECT_NEAR(cosine(a, a), 1.0, 1e-9);
    const double s = scale(rng);
    const double t = scale(rng);
    EmbeddingVector sa = a, tb = b;
    for (auto& v : sa.values) v *= s;
    for (auto& v : tb.values) v *= t;
    EXPECT_NEAR(cosine(sa, tb), cosine(a, b), 1e-9);
    const double c = cosine(a, b);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(LocalHashedProviderTest, DeterministicAndUnitNorm) {
  LocalHashedProvider provider(128);
  const auto a = provider.embed(python("x = 1"));
  const auto b = provider.embed(python("x = 1"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.dimension(), 128u);
  EXPECT_NEAR(l2_norm(a.values), 1.0, 1e-9);
}

TEST(LocalHashedProviderTest, EmptyProgramGetsSentinelDirection) {
  LocalHashedProvider provider(64);
  const auto e = provider.embed(python(""));
  EXPECT_NEAR(l2_norm(e.values), 1.0, 1e-12);
  EXPECT_EQ(provider.embed(python("")), e);
}

TEST(LocalHashedProviderTest, SimilarProgramsScoreHigherThanUnrelated) {
  LocalHashedProvider provider(256);
  const auto base = provider.embed(python("def f(xs):\n    return sum(x * x for x in xs)\n"));
  const auto near = provider.embed(python("def g(xs):\n    return sum(x * x for x in xs)\n"));
  const auto far = provider.embed(python("import os\nprint(os.getcwd())\n"));
  EXPECT_GT(cosine(base, near), cosine(base, far));
}

TEST(ProviderConfigTest, Validation) {
  EXPECT_EQ(code_of([] { EmbeddingProviderConfig::local(32).validate(); }), ErrorCode::kInvalidArgument);
  EmbeddingProviderConfig remote;
  remote.kind = ProviderKind::kRemote;
  EXPECT_EQ(code_of([&] { remote.validate(); }), ErrorCode::kInvalidArgument);
  remote.endpoint = "http://localhost:1/v1";
  remote.model_name = "m";
  EXPECT_NO_THROW(remote.validate());
}

EmbeddingProviderConfig remote_config(const std::string& endpoint) {
  EmbeddingProviderConfig config;
  config.kind = ProviderKind::kRemote;
  config.endpoint = endpoint;
  config.model_name = "embedder";
  config.api_key = "test-key";
  config.retry.initial_backoff = std::chrono::milliseconds(5);
  return config;
}

TEST(RemoteProviderTest, PassesVectorThrough) {
  MockServer server;
  server.on_embeddings([](const json&) {
    return MockReply{200, {{"data", json::array({{{"embedding", {0.6, 0.8}}}})}}};
  });
  auto provider = make_provider(remote_config(server.endpoint()));
  const auto v = provider->embed(python("x = 1"));
  EXPECT_EQ(v.values, (std::vector<double>{0.6, 0.8}));
  const auto body = server.bodies().at(0);
  EXPECT_EQ(body["model"], "embedder");
  EXPECT_EQ(body["input"], json::array({"x = 1"}));
}

TEST(RemoteProviderTest, MemoizesWithinProcess) {
  MockServer server;
  server.on_embeddings([](const json&) {
    return MockReply{200, {{"data", json::array({{{"embedding", {1.0, 0.0}}}})}}};
  });
  auto provider = make_provider(remote_config(server.endpoint()));
  provider->embed(python("x = 1"));
  provider->embed(python("x = 1"));
  EXPECT_EQ(server.requests(), 1);
}

TEST(RemoteProviderTest, ZeroVectorIsDegenerate) {
  MockServer server;
  server.on_embeddings([](const json&) {
    return MockReply{200, {{"data", json::array({{{"embedding", {0.0, 0.0}}}})}}};
  });
  auto provider = make_provider(remote_config(server.endpoint()));
  EXPECT_EQ(code_of([&] { provider->embed(python("x")); }), ErrorCode::kDegenerateEmbedding);
}

TEST(RemoteProviderTest, RetriesTransientFailuresThenSucceeds) {
  MockServer server;
  std::atomic<int> calls{0};
  server.on_embeddings([&](const json&) {
    if (calls++ < 2) return MockReply{503, {{"error", "busy"}}};
    return MockReply{200, {{"data", json::array({{{"embedding", {0.0, 1.0}}}})}}};
  });
  auto provider = make_provider(remote_config(server.endpoint()));
  EXPECT_EQ(provider->embed(python("y")).values, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(server.requests(), 3);
}

TEST(RemoteProviderTest, UnreachableEndpointIsProviderUnavailable) {
  auto config = remote_config("http://127.0.0.1:1/v1");
  config.retry.max_retries = 1;
  auto provider = make_provider(config);
  EXPECT_EQ(code_of([&] { provider->embed(python("x")); }), ErrorCode::kProviderUnavailable);
}

TEST(RemoteProviderTest, BoundsRequestsInFlight) {
  MockServer server;
  server.set_delay(std::chrono::milliseconds(30));
  server.on_embeddings([](const json& body) {
    const double seed = static_cast<double>(body["input"][0].get<std::string>().size());
    return MockReply{200, {{"data", json::array({{{"embedding", {1.0, seed}}}})}}};
  });
  auto config = remote_config(server.endpoint());
  config.max_in_flight = 3;
  auto provider = make_provider(config);
  parallel_for(12, 12, [&](std::size_t k) { provider->embed(python(std::string(k + 1, 'x'))); });
  EXPECT_EQ(server.requests(), 12);
  EXPECT_LE(server.peak_in_flight(), 3);
  EXPECT_GE(server.peak_in_flight(), 2);
}

}  // namespace
}  // namespace honest
