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

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <gtest/gtest.h>

#include "honest/llm_client.hpp"
#include "support/mock_server.hpp"

namespace honest {
namespace {

using testing::chat_reply;
using testing::MockReply;
using testing::MockServer;
using testing::yes_no_reply;

SamplingConfig config_for(const MockServer& server, int n = 4) {
  SamplingConfig config;
  config.endpoint = server.endpoint();
  config.model = "mock-model";
  config.api_key = "k";
  config.n = n;
  config.retry.initial_backoff = std::chrono::milliseconds(5);
  return config;
}

LlmClient::Logger quiet() {
  return [](const std::string&) {};
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

TEST(ExtractCodeBlockTest, Examples) {
  EXPECT_EQ(extract_code_block("```python\nx = 1\n```"), "x = 1");
  EXPECT_EQ(extract_code_block("no code here"), "no code here");
  EXPECT_EQ(extract_code_block("```python\na = 1\n```\ntext\n```python\nb = 2\n```"), "a = 1");
}

TEST(ExtractCodeBlockTest, FixtureSet) {
  struct Case {
    std::string response;
    std::string expected;
    bool fenced;
  };
  const std::vector<Case> cases = {
      {"```python\nx = 1\n```", "x = 1", true},
      {"Here you go:\n```py\ndef f():\n    return 2\n```\nHope it helps.", "def f():\n    return 2", true},
      {"```\nprint('hi')\n```", "print('hi')", true},
      {"```java\nclass A {}\n```", "class A {}", true},
      {"  just prose, no fence  \n", "just prose, no fence", false},
      {"```python\nfirst()\n```\n```python\nsecond()\n```", "first()", true},
      {"```python\nunterminated = True\n", "unterminated = True", true},
      {"```print(1)```", "print(1)", true},
      {"Text before\n\n```Python\n  indented = 1\n```", "indented = 1", true},
      {"", "", false},
  };
  for (const auto& c : cases) {
    const auto block = find_code_block(c.response);
    EXPECT_EQ(block.text, c.expected) << c.response;
    EXPECT_EQ(block.fenced, c.fenced) << c.response;
    EXPECT_EQ(extract_code_block(block.text), block.text) << "not idempotent: " << c.response;
  }
}

TEST(YesProbabilityTest, Examples) {
  EXPECT_NEAR(yes_probability({{"Yes", std::log(0.7)}, {"No", std::log(0.2)}}), 0.7 / 0.9, 1e-12);
  EXPECT_NEAR(yes_probability({{"Yes", std::log(0.7)}, {"No", std::log(0.2)}}), 0.7778, 5e-5);
  EXPECT_NEAR(yes_probability({{"Yes", std::log(0.4)}}), 0.4, 1e-12);
  EXPECT_EQ(yes_probability({{"No", std::log(0.9)}}), 0.0);
  EXPECT_NEAR(yes_probability({{" yes", std::log(0.3)}, {"YES", std::log(0.3)}, {"no", std::log(0.2)}}), 0.75, 1e-12);
}

TEST(SamplingConfigTest, FiveTemperaturePreset) {
  SamplingConfig config;
  config.endpoint = "http://x/v1";
  config.model = "m";
  config.use_five_temperature_preset();
  EXPECT_EQ(config.n, 5);
  EXPECT_EQ(config.temperatures(), (std::vector<double>{0.0, 0.2, 0.6, 0.8, 1.0}));
  EXPECT_NO_THROW(config.validate());
  config.n = 6;
  EXPECT_EQ(code_of([&] { config.validate(); }), ErrorCode::kInvalidArgument);
}

TEST(SamplingConfigTest, Validation) {
  SamplingConfig config;
  config.endpoint = "http://x/v1";
  config.model = "m";
  EXPECT_EQ(config.n, 20);
  EXPECT_EQ(config.parallelism, 4);
  EXPECT_EQ(config.temperatures(), std::vector<double>(20, 1.0));
  config.temperature = 2.5;
  EXPECT_THROW(config.validate(), Error);
}

TEST(LlmClientTest, SamplesDistinctProgramsInRequestOrder) {
  MockServer server;
  std::atomic<int> counter{0};
  server.on_chat([&](const json&) {
    const int k = counter++;
    return MockReply{200, chat_reply("```python\nvalue = " + std::to_string(k) + "\n```")};
  });
  LlmClient client(config_for(server, 6), quiet());
  const auto set = client.sample_programs("r1", "Return a number.", Language::kPython);
  ASSERT_EQ(set.programs.size(), 6u);
  std::set<std::string> distinct;
  for (std::size_t k = 0; k < 6; ++k) {
    const auto& p = set.programs[k];
    ASSERT_TRUE(p.origin);
    EXPECT_EQ(p.origin->sample_index, static_cast<int>(k));
    EXPECT_EQ(p.origin->temperature, 1.0);
    EXPECT_FALSE(p.origin->unfenced);
    ASSERT_TRUE(p.origin->token_probs);
    for (double prob : *p.origin->token_probs) EXPECT_NEAR(prob, 0.9, 1e-12);
    distinct.insert(p.source);
  }
  EXPECT_EQ(distinct.size(), 6u);
}

TEST(LlmClientTest, RequestBodyFields) {
  MockServer server;
  server.on_chat([](const json&) { return MockReply{200, chat_reply("```python\nx = 1\n```")}; });
  auto config = config_for(server, 2);
  config.seed = 42;
  LlmClient client(config, quiet());
  client.sample_programs("r", "Do it.", Language::kPython);
  auto bodies = server.bodies();
  ASSERT_EQ(bodies.size(), 2u);
  std::sort(bodies.begin(), bodies.end(), [](const json& a, const json& b) { return a["seed"] < b["seed"]; });
  const auto& body = bodies[0];
  EXPECT_EQ(body["model"], "mock-model");
  EXPECT_EQ(body["n"], 1);
  EXPECT_EQ(body["temperature"], 1.0);
  EXPECT_EQ(body["max_tokens"], 1024);
  EXPECT_EQ(body["logprobs"], true);
  EXPECT_EQ(body["top_logprobs"], 5);
  EXPECT_EQ(body["seed"], 42);
  EXPECT_EQ(bodies[1]["seed"], 43);
  ASSERT_EQ(body["messages"].size(), 2u);
  const std::string prompt = body["messages"][1]["content"];
  EXPECT_NE(prompt.find("Do it."), std::string::npos);
  EXPECT_NE(prompt.find("```python"), std::string::npos);
}

TEST(LlmClientTest, FiveTemperaturePresetSendsSchedule) {
  MockServer server;
  server.on_chat([](const json& body) {
    return MockReply{200, chat_reply("```python\nt = " + body["temperature"].dump() + "\n```")};
  });
  auto config = config_for(server);
  config.use_five_temperature_preset();
  LlmClient client(config, quiet());
  const auto set = client.sample_programs("r", "req", Language::kPython);
  ASSERT_EQ(set.programs.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(set.programs[k].origin->temperature, kFiveTemperaturePreset[k]);
  EXPECT_EQ(set.programs[2].source, "t = 0.6");
}

TEST(LlmClientTest, RetriesTransientFailures) {
  MockServer server;
  std::atomic<int> calls{0};
  server.on_chat([&](const json&) {
    const int k = calls++;
    if (k == 0) return MockReply{503, {{"error", "overloaded"}}};
    if (k == 1) return MockReply{429, {{"error", "slow down"}}};
    return MockReply{200, chat_reply("```python\nok = 1\n```")};
  });
  auto config = config_for(server, 1);
  config.parallelism = 1;
  std::vector<std::string> log;
  LlmClient client(config, [&](const std::string& line) { log.push_back(line); });
  const auto records = client.sample_records("req", Language::kPython);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].program.source, "ok = 1");
  EXPECT_EQ(client.retries(), 2);
  EXPECT_EQ(log.size(), 2u);
}

TEST(LlmClientTest, GivesUpAfterRetriesAndOnClientErrors) {
  MockServer server;
  server.on_chat([](const json&) { return MockReply{500, {{"error", "boom"}}}; });
  auto config = config_for(server, 2);
  LlmClient client(config, quiet());
  EXPECT_EQ(code_of([&] { client.sample_records("req", Language::kPython); }), ErrorCode::kEndpointError);
  EXPECT_EQ(server.requests(), 2 * 3);

  MockServer bad_request;
  bad_request.on_chat([](const json&) { return MockReply{400, {{"error", "bad"}}}; });
  LlmClient client2(config_for(bad_request, 1), quiet());
  EXPECT_EQ(code_of([&] { client2.sample_records("req", Language::kPython); }), ErrorCode::kEndpointError);
  EXPECT_EQ(bad_request.requests(), 1);
}

TEST(LlmClientTest, UnreachableEndpoint) {
  SamplingConfig config;
  config.endpoint = "http://127.0.0.1:1/v1";
  config.model = "m";
  config.n = 2;
  config.retry.max_retries = 0;
  LlmClient client(config, quiet());
  EXPECT_EQ(code_of([&] { client.sample_records("req", Language::kPython); }), ErrorCode::kEndpointError);
}

TEST(LlmClientTest, ProseIsKeptAndFlaggedUnfenced) {
  MockServer server;
  server.on_chat([](const json&) { return MockReply{200, chat_reply("I would simply loop over the list.")}; });
  LlmClient client(config_for(server, 2), quiet());
  const auto set = client.sample_programs("r", "req", Language::kPython);
  ASSERT_EQ(set.programs.size(), 2u);
  EXPECT_EQ(set.programs[0].source, "I would simply loop over the list.");
  EXPECT_TRUE(set.programs[0].origin->unfenced);
}

TEST(LlmClientTest, EmptyCompletions) {
  MockServer server;
  server.on_chat([](const json&) { return MockReply{200, chat_reply("")}; });
  LlmClient client(config_for(server, 3), quiet());
  EXPECT_EQ(code_of([&] { client.sample_records("req", Language::kPython); }), ErrorCode::kEmptyCompletion);

  MockServer partly;
  std::atomic<int> calls{0};
  partly.on_chat([&](const json&) {
    return MockReply{200, chat_reply(calls++ == 0 ? "```python\nx = 1\n```" : "   ")};
  });
  auto config = config_for(partly, 3);
  config.parallelism = 1;
  LlmClient client2(config, quiet());
  EXPECT_EQ(code_of([&] { client2.sample_records("req", Language::kPython); }), ErrorCode::kTooFewUsable);
}

TEST(LlmClientTest, BoundedInFlightAndArrivalIndependentOrder) {
  MockServer server;
  server.on_chat([](const json& body) {
    const auto seed = body["seed"].get<int>();
    // Later requests answer sooner.
    std::this_thread::sleep_for(std::chrono::milliseconds(5 * (12 - seed)));
    return MockReply{200, chat_reply("```python\nidx = " + std::to_string(seed) + "\n```")};
  });
  auto config = config_for(server, 12);
  config.parallelism = 3;
  config.seed = 0;
  LlmClient client(config, quiet());
  const auto set = client.sample_programs("r", "req", Language::kPython);
  ASSERT_EQ(set.programs.size(), 12u);
  for (std::size_t k = 0; k < 12; ++k) EXPECT_EQ(set.programs[k].source, "idx = " + std::to_string(k));
  EXPECT_LE(server.peak_in_flight(), 3);
  EXPECT_GE(server.peak_in_flight(), 2);
}

TEST(LlmClientTest, AskYesNo) {
  MockServer server;
  std::atomic<int> calls{0};
  server.on_chat([&](const json& body) {
    EXPECT_EQ(body["max_tokens"], 1);
    EXPECT_EQ(body["top_logprobs"], 5);
    switch (calls++) {
      case 0: return MockReply{200, yes_no_reply({{"Yes", 0.7}, {"No", 0.2}})};
      case 1: return MockReply{200, yes_no_reply({{"Yes", 0.4}})};
      case 2: return MockReply{200, yes_no_reply({{"No", 0.95}})};
      default: {
        json reply = chat_reply("Yes");
        reply["choices"][0].erase("logprobs");
        return MockReply{200, reply};
      }
    }
  });
  auto config = config_for(server, 1);
  LlmClient client(config, quiet());
  EXPECT_NEAR(client.ask_yes_no("q"), 0.7778, 5e-5);
  EXPECT_NEAR(client.ask_yes_no("q"), 0.4, 1e-9);
  EXPECT_EQ(client.ask_yes_no("q"), 0.0);
  EXPECT_EQ(code_of([&] { client.ask_yes_no("q"); }), ErrorCode::kLogprobsUnavailable);
}

TEST(LlmClientTest, AuditLogRecordsEveryExchange) {
  MockServer server;
  server.on_chat([](const json&) { return MockReply{200, chat_reply("```python\nx = 1\n```")}; });
  const auto path = std::filesystem::temp_directory_path() / "honest_audit_test.jsonl";
  std::filesystem::remove(path);
  auto config = config_for(server, 3);
  config.audit_log = path.string();
  LlmClient client(config, quiet());
  client.sample_records("req", Language::kPython);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto entry = json::parse(line);
    EXPECT_TRUE(entry.contains("request"));
    EXPECT_TRUE(entry.contains("response"));
    ++lines;
  }
  EXPECT_EQ(lines, 3);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace honest
