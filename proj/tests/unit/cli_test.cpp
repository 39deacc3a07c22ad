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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "honest/cli.hpp"
#include "support/mock_server.hpp"
#include "support/synthetic.hpp"

namespace honest {
namespace {

namespace fs = std::filesystem;
using testing::chat_reply;
using testing::MockReply;
using testing::MockServer;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "honest");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("honest_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    for (const char* var : {"HONEST_SEED", "HONEST_MODEL", "HONEST_ENDPOINT", "HONEST_CONFIG", "HONEST_THRESHOLD"}) {
      unsetenv(var);
    }
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("HONEST_SEED");
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SettingsPrecedenceFlagEnvFileDefault) {
  std::ofstream(path("run.conf")) << "# comment\nmodel = from-file\nseed = 7\nthreshold = 0.8\n";
  setenv("HONEST_SEED", "9", 1);
  const auto r = run({"--config", path("run.conf"), "--model", "from-flag", "--print-config"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("model = from-flag  # flag"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("seed = 9  # env"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("threshold = 0.80000000000000004  # file"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("n = 20  # default"), std::string::npos) << r.out;
}

TEST_F(CliTest, DefaultSeedIs42AndSecretsAreRedacted) {
  const auto r = run({"--api-key", "sk-secret", "--print-config"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("seed = 42  # default"), std::string::npos);
  EXPECT_EQ(r.out.find("sk-secret"), std::string::npos);
  EXPECT_NE(r.out.find("api_key = <redacted>"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"--method", "nonsense", "eval"}).code, kExitUsage);
  std::ofstream(path("bad.conf")) << "colour = blue\n";
  EXPECT_EQ(run({"--config", path("bad.conf"), "--print-config"}).code, kExitUsage);
  EXPECT_EQ(run({"estimate"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, SampleWritesTwentyPrograms) {
  MockServer server;
  std::atomic<int> counter{0};
  server.on_chat([&](const json&) {
    return MockReply{200, chat_reply("```python\nx = " + std::to_string(counter++) + "\n```")};
  });
  const auto r = run({"--endpoint", server.endpoint(), "--model", "mock", "--n", "20", "--temperature", "1.0",
                      "sample", "--requirement", "Return a number.", "--out", path("a.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto entries = load_samples(path("a.jsonl"));
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].programs.size(), 20u);
  EXPECT_EQ(entries[0].prompt_version, "zero-shot-v1");
  EXPECT_EQ(entries[0].model, "mock");
  for (const auto& p : entries[0].programs) {
    EXPECT_EQ(p.temperature, 1.0);
    EXPECT_TRUE(p.token_probs.has_value());
  }
}

TEST_F(CliTest, SamplePresetUsesFiveTemperatures) {
  MockServer server;
  server.on_chat([](const json&) { return MockReply{200, chat_reply("```python\ny = 1\n```")}; });
  const auto r = run({"--endpoint", server.endpoint(), "--model", "mock", "--preset", "paper-five", "sample",
                      "--requirement", "r", "--out", path("p.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto entries = load_samples(path("p.jsonl"));
  std::vector<double> temps;
  for (const auto& p : entries.at(0).programs) temps.push_back(p.temperature);
  EXPECT_EQ(temps, (std::vector<double>{0.0, 0.2, 0.6, 0.8, 1.0}));
}

TEST_F(CliTest, SampleUnreachableEndpointExitsThree) {
  const auto r = run({"--endpoint", "http://127.0.0.1:1/v1", "--model", "m", "--max-retries", "0", "--n", "2",
                      "sample", "--requirement", "r", "--out", path("x.jsonl")});
  EXPECT_EQ(r.code, kExitNetwork);
  EXPECT_NE(r.err.find("EndpointError"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("x.jsonl")));
}

TEST_F(CliTest, SampleWholeBenchmark) {
  const auto fixture = synthetic::write_fixture(dir_ / "fx", 2, 3, 1);
  MockServer server;
  server.on_chat([](const json&) { return MockReply{200, chat_reply("```python\nz = 2\n```")}; });
  const auto r = run({"--endpoint", server.endpoint(), "--model", "m1", "--n", "3", "sample", "--benchmark",
                      fixture.benchmark.string(), "--out", path("all.jsonl.gz")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_samples(path("all.jsonl.gz")).size(), 4u);
  EXPECT_EQ(server.requests(), 12);
}

void write_archive(const std::string& path, const std::vector<std::string>& programs) {
  SampleArchiveEntry entry{"req-1", "m1", Language::kPython, "Double a number.", "zero-shot-v1", {}};
  for (const auto& p : programs) entry.programs.push_back({p, 1.0, std::nullopt, std::nullopt, false});
  save_samples(path, {entry});
}

TEST_F(CliTest, EstimateIdenticalProgramsWithDefaultWeights) {
  write_archive(path("a.jsonl"), std::vector<std::string>(4, "def f(x):\n    return 2 * x\n"));
  const auto r = run({"estimate", "--samples", path("a.jsonl"), "--out", path("r.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("uniform weights"), std::string::npos);
  const auto reports = load_reports(path("r.jsonl"));
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_NEAR(reports[0].confidence, 1.0, 1e-9);
  EXPECT_EQ(reports[0].weights, SimilarityWeights::uniform());

  const auto missing = run({"--weights", path("nope.json"), "estimate", "--samples", path("a.jsonl"), "--out",
                            path("r2.jsonl")});
  EXPECT_EQ(missing.code, 0);
  EXPECT_NE(missing.err.find("not found"), std::string::npos);
}

TEST_F(CliTest, EstimateSingleProgramIsTooFewSamples) {
  write_archive(path("one.jsonl"), {"x = 1"});
  const auto r = run({"estimate", "--samples", path("one.jsonl"), "--out", path("r.jsonl")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("TooFewSamples"), std::string::npos);
}

TEST_F(CliTest, GateDecisions) {
  write_archive(path("a.jsonl"), {"x = 1", "x = 1", "x = 1"});
  ASSERT_EQ(run({"estimate", "--samples", path("a.jsonl"), "--out", path("r.jsonl")}).code, 0);
  const auto show = run({"--threshold", "0.5", "gate", "--reports", path("r.jsonl"), "--samples", path("a.jsonl")});
  ASSERT_EQ(show.code, 0) << show.err;
  const auto shown = json::parse(show.out);
  EXPECT_EQ(shown["verdict"], "show");
  EXPECT_EQ(shown["programs"].size(), 3u);

  const auto top = run({"--top", "1", "gate", "--reports", path("r.jsonl"), "--samples", path("a.jsonl")});
  EXPECT_EQ(json::parse(top.out)["programs"].size(), 1u);

  // Confidence is exactly 1, so a threshold of 1 refuses.
  const auto refuse = run({"--threshold", "1", "gate", "--reports", path("r.jsonl"), "--samples", path("a.jsonl")});
  const auto refused = json::parse(refuse.out);
  EXPECT_EQ(refused["verdict"], "refuse");
  EXPECT_EQ(refused["message"], "Sorry, I cannot solve this requirement.");
  EXPECT_TRUE(refused["programs"].is_null());

  const auto custom = run({"--threshold", "1", "--message", "Not today.", "gate", "--reports", path("r.jsonl"),
                           "--samples", path("a.jsonl")});
  EXPECT_EQ(json::parse(custom.out)["message"], "Not today.");
  EXPECT_EQ(run({"--threshold", "2", "gate", "--reports", path("r.jsonl"), "--samples", path("a.jsonl")}).code,
            kExitUsage);
}

TEST_F(CliTest, EvalHonestOnSeparableFixture) {
  const auto fixture = synthetic::write_fixture(dir_ / "fx", 12, 5, 3);
  const auto r = run({"eval", "--benchmark", fixture.benchmark.string(), "--samples", fixture.samples.string(),
                      "--split", "all", "--out", path("m.json"), "--curves", path("curves")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto metrics = json::parse(slurp(path("m.json")));
  EXPECT_GE(metrics["auroc"].get<double>(), 0.95);
  EXPECT_EQ(metrics["samples"], 24);
  EXPECT_EQ(metrics["seed"], 42);
  EXPECT_EQ(metrics["sweep"].size(), 100u);
  EXPECT_NE(r.out.find("AUROC"), std::string::npos);
  for (const char* f : {"roc.csv", "pr.csv", "sweep.csv"}) EXPECT_TRUE(fs::exists(dir_ / "curves" / f)) << f;
}

TEST_F(CliTest, EvalBaselines) {
  const auto fixture = synthetic::write_fixture(dir_ / "fx", 8, 3, 4);
  const auto avg = run({"--method", "avg-prob", "eval", "--benchmark", fixture.benchmark.string(), "--samples",
                        fixture.samples.string(), "--out", path("avg.json")});
  ASSERT_EQ(avg.code, 0) << avg.err;
  EXPECT_EQ(json::parse(slurp(path("avg.json")))["auroc"], 0.5);

  const auto knn = run({"--method", "knn-bm25", "eval", "--benchmark", fixture.benchmark.string(), "--out",
                        path("knn.json")});
  ASSERT_EQ(knn.code, 0) << knn.err;
  const auto knn_metrics = json::parse(slurp(path("knn.json")));
  EXPECT_TRUE(knn_metrics.contains("k"));
  EXPECT_EQ(knn_metrics["k_source"], "tuned");
  EXPECT_NE(knn.out.find("k "), std::string::npos);
  EXPECT_TRUE(knn_metrics["sweep"].is_null());

  const auto fixed_k = run({"--method", "knn-embed", "--k", "3", "eval", "--benchmark", fixture.benchmark.string(),
                            "--out", path("knn2.json")});
  ASSERT_EQ(fixed_k.code, 0) << fixed_k.err;
  EXPECT_EQ(json::parse(slurp(path("knn2.json")))["k"], 3);

  const auto trapezoid = run({"--pr-mode", "trapezoid", "eval", "--benchmark", fixture.benchmark.string(),
                              "--samples", fixture.samples.string(), "--out", path("t.json")});
  ASSERT_EQ(trapezoid.code, 0) << trapezoid.err;
  EXPECT_EQ(json::parse(slurp(path("t.json")))["aucpr_mode"], "trapezoid");
}

TEST_F(CliTest, EvalUnimplementedClassifiers) {
  for (const char* method : {"code-classifier", "requirement-classifier"}) {
    const auto r = run({"--method", method, "eval", "--benchmark", path("whatever.jsonl")});
    EXPECT_EQ(r.code, kExitUnsupported);
    EXPECT_NE(r.err.find("unimplemented baseline"), std::string::npos);
  }
}

TEST_F(CliTest, EvalMissingLogprobsIsAPreconditionFailure) {
  const auto fixture = synthetic::write_fixture(dir_ / "fx", 2, 3, 5);
  auto entries = load_samples(fixture.samples);
  for (auto& e : entries) {
    for (auto& p : e.programs) p.token_probs.reset();
  }
  save_samples(fixture.samples, entries);
  const auto r = run({"--method", "product-prob", "eval", "--benchmark", fixture.benchmark.string(), "--samples",
                      fixture.samples.string(), "--split", "all"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("MissingLogprobs"), std::string::npos);
}

TEST_F(CliTest, TuneThenEstimateWithTunedWeights) {
  const auto fixture = synthetic::write_fixture(dir_ / "fx", 6, 4, 6);
  const auto r = run({"tune", "--benchmark", fixture.benchmark.string(), "--samples", fixture.samples.string(),
                      "--out", path("w.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto weights = json::parse(slurp(path("w.json")));
  EXPECT_EQ(weights["grid_points_evaluated"], 1771);
  EXPECT_EQ(weights["seed"], 42);
  EXPECT_EQ(weights["train_auroc"], 1.0);
  const auto tuned = load_weights(path("w.json"));
  const auto est = run({"--weights", path("w.json"), "estimate", "--samples", fixture.samples.string(), "--out",
                        path("r.jsonl")});
  ASSERT_EQ(est.code, 0) << est.err;
  EXPECT_EQ(est.err.find("uniform"), std::string::npos);
  EXPECT_EQ(load_reports(path("r.jsonl")).at(0).weights, tuned);
}

TEST_F(CliTest, SplitsFallBackToSeededRatio) {
  auto fixture = synthetic::write_fixture(dir_ / "fx", 5, 3, 7);
  auto benchmark = load_benchmark(fixture.benchmark);
  for (auto& s : benchmark) s.split.reset();
  save_benchmark(fixture.benchmark, benchmark);
  const auto a = run({"--seed", "1", "--method", "avg-prob", "eval", "--benchmark", fixture.benchmark.string(),
                      "--samples", fixture.samples.string(), "--out", path("a.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(json::parse(slurp(path("a.json")))["samples"], 5);
}

}  // namespace
}  // namespace honest
