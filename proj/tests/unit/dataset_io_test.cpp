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

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "honest/dataset_io.hpp"

namespace honest {
namespace {

namespace fs = std::filesystem;

class DatasetIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("honest_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream(path) << content;
    return path;
  }

  ErrorCode code_of(const std::function<void()>& fn) {
    try {
      fn();
    } catch (const Error& e) {
      message_ = e.what();
      return e.code();
    }
    ADD_FAILURE() << "expected an honest::Error";
    return ErrorCode::kInvalidArgument;
  }

  fs::path dir_;
  std::string message_;
  std::vector<std::string> warnings_;
  WarningSink collect() {
    return [this](const std::string& w) { warnings_.push_back(w); };
  }
};

TEST_F(DatasetIoTest, LoadsSchemaEcho) {
  const auto path = write("b.jsonl",
                          R"({"id":"py-001","language":"python","requirement":"Add two numbers.","labels":{"m1":"passed"},"split":"train"})"
                          "\n");
  const auto samples = load_benchmark(path, collect());
  ASSERT_EQ(samples.size(), 1u);
  EXPECT_EQ(samples[0].id, "py-001");
  EXPECT_EQ(samples[0].language, Language::kPython);
  EXPECT_EQ(samples[0].requirement, "Add two numbers.");
  EXPECT_EQ(samples[0].labels.at("m1"), Outcome::kPassed);
  EXPECT_EQ(samples[0].split, Split::kTrain);
  EXPECT_TRUE(warnings_.empty());
}

TEST_F(DatasetIoTest, UnknownFieldsWarnAndBlankLinesAreSkipped) {
  const auto path = write("b.jsonl",
                          R"({"id":"a","language":"java","requirement":"r","labels":{"m":"failed"},"extra":1})"
                          "\n\n");
  const auto samples = load_benchmark(path, collect());
  ASSERT_EQ(samples.size(), 1u);
  EXPECT_FALSE(samples[0].split.has_value());
  ASSERT_EQ(warnings_.size(), 1u);
  EXPECT_NE(warnings_[0].find("extra"), std::string::npos);
}

TEST_F(DatasetIoTest, RejectsDuplicateIds) {
  const std::string line = R"({"id":"x","language":"python","requirement":"r","labels":{"m":"passed"}})";
  const auto path = write("b.jsonl", line + "\n" + line + "\n");
  EXPECT_EQ(code_of([&] { load_benchmark(path, collect()); }), ErrorCode::kDuplicateId);
}

TEST_F(DatasetIoTest, MalformedLinesCarryLineNumbers) {
  const std::string good = R"({"id":"a","language":"python","requirement":"r","labels":{"m":"passed"}})";
  const auto maybe = write("m.jsonl", good + "\n" + R"({"id":"b","language":"python","requirement":"r","labels":{"m":"maybe"}})" + "\n");
  EXPECT_EQ(code_of([&] { load_benchmark(maybe, collect()); }), ErrorCode::kMalformedLine);
  EXPECT_NE(message_.find(":2"), std::string::npos) << message_;
  const auto broken = write("j.jsonl", "{not json\n");
  EXPECT_EQ(code_of([&] { load_benchmark(broken, collect()); }), ErrorCode::kMalformedLine);
  const auto no_req = write("r.jsonl", R"({"id":"a","language":"python","labels":{}})" "\n");
  EXPECT_EQ(code_of([&] { load_benchmark(no_req, collect()); }), ErrorCode::kMalformedLine);
  const auto cobol = write("l.jsonl", R"({"id":"a","language":"cobol","requirement":"r","labels":{}})" "\n");
  EXPECT_EQ(code_of([&] { load_benchmark(cobol, collect()); }), ErrorCode::kUnknownLanguage);
  EXPECT_EQ(code_of([&] { load_benchmark(dir_ / "missing.jsonl", collect()); }), ErrorCode::kIoError);
}

std::vector<BenchmarkSample> make_samples(std::size_t n) {
  std::vector<BenchmarkSample> out;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back({"id-" + std::to_string(k), k % 3 ? Language::kPython : Language::kJava,
                   "requirement \"" + std::to_string(k) + "\"\nwith newline",
                   {{"m1", k % 2 ? Outcome::kPassed : Outcome::kFailed}, {"m2", Outcome::kPassed}},
                   k % 4 ? std::optional<Split>(Split::kTest) : std::nullopt});
  }
  return out;
}

TEST_F(DatasetIoTest, SplitSizesMatchRatio) {
  auto [train, test] = split_benchmark(make_samples(10), 0.5, 42);
  EXPECT_EQ(train.size(), 5u);
  EXPECT_EQ(test.size(), 5u);
  std::vector<std::string> ids;
  for (int k = 0; k < 1138; ++k) ids.push_back("s" + std::to_string(k));
  auto [big_train, big_test] = split_benchmark(ids, 0.5, 7);
  EXPECT_EQ(big_train.size(), 569u);
  EXPECT_EQ(big_test.size(), 569u);
  auto [t3, s3] = split_benchmark(make_samples(7), 0.3, 1);
  EXPECT_EQ(t3.size(), 2u);
  EXPECT_EQ(s3.size(), 5u);
}

TEST_F(DatasetIoTest, SplitIsDeterministicAndPartitions) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<std::string> ids;
    for (int k = 0; k < 37; ++k) ids.push_back("s" + std::to_string(k));
    const auto a = split_benchmark(ids, 0.5, seed);
    const auto b = split_benchmark(ids, 0.5, seed);
    EXPECT_EQ(a, b);
    std::set<std::string> train(a.first.begin(), a.first.end());
    std::set<std::string> test(a.second.begin(), a.second.end());
    std::set<std::string> all = train;
    all.insert(test.begin(), test.end());
    EXPECT_EQ(all.size(), ids.size());
    EXPECT_EQ(train.size() + test.size(), ids.size());
  }
  const std::vector<std::string> ids{"a", "b", "c", "d", "e", "f", "g", "h"};
  EXPECT_NE(split_benchmark(ids, 0.5, 1), split_benchmark(ids, 0.5, 2));
}

TEST_F(DatasetIoTest, SplitPreconditions) {
  EXPECT_EQ(code_of([] { split_benchmark(std::vector<int>{1}, 0.5, 0); }), ErrorCode::kTooFewSamples);
  EXPECT_EQ(code_of([] { split_benchmark(std::vector<int>{1, 2}, 1.0, 0); }), ErrorCode::kInvalidArgument);
}

TEST_F(DatasetIoTest, BenchmarkRoundTripPlainAndGzip) {
  const auto samples = make_samples(25);
  for (const char* name : {"bench.jsonl", "bench.jsonl.gz"}) {
    save_benchmark(dir_ / name, samples);
    EXPECT_EQ(load_benchmark(dir_ / name, collect()), samples) << name;
  }
  std::ifstream gz(dir_ / "bench.jsonl.gz", std::ios::binary);
  unsigned char magic[2] = {};
  gz.read(reinterpret_cast<char*>(magic), 2);
  EXPECT_EQ(magic[0], 0x1f);
  EXPECT_EQ(magic[1], 0x8b);
}

TEST_F(DatasetIoTest, ArchiveWithFiveTemperatures) {
  const auto path = write("s.jsonl",
                          R"({"id":"py-001","model":"m1","programs":[)"
                          R"({"source":"a","temperature":0},{"source":"b","temperature":0.2},)"
                          R"({"source":"c","temperature":0.6},{"source":"d","temperature":0.8},)"
                          R"({"source":"e","temperature":1,"token_probs":[0.5,1.0],"passed":true}]})"
                          "\n");
  const auto entries = load_samples(path, collect());
  ASSERT_EQ(entries.size(), 1u);
  ASSERT_EQ(entries[0].programs.size(), 5u);
  EXPECT_EQ(entries[0].programs[2].temperature, 0.6);
  EXPECT_EQ(entries[0].programs[4].token_probs, (std::vector<double>{0.5, 1.0}));
  EXPECT_FALSE(entries[0].programs_correct().has_value());
  const auto set = entries[0].to_sample_set(Language::kJava);
  EXPECT_EQ(set.programs[1].language, Language::kJava);
  EXPECT_EQ(set.programs[3].origin->sample_index, 3);
}

TEST_F(DatasetIoTest, ArchiveErrors) {
  const auto empty = write("e.jsonl", R"({"id":"a","model":"m","programs":[]})" "\n");
  EXPECT_EQ(code_of([&] { load_samples(empty, collect()); }), ErrorCode::kMalformedLine);
  const auto bad_prob = write("p.jsonl", R"({"id":"a","programs":[{"source":"x","token_probs":[1.5]}]})" "\n");
  EXPECT_EQ(code_of([&] { load_samples(bad_prob, collect()); }), ErrorCode::kMalformedLine);
}

TEST_F(DatasetIoTest, UnknownIdsSurfaceAtJoin) {
  const auto path = write("s.jsonl", R"({"id":"ghost","model":"m1","programs":["x = 1","x = 2"]})" "\n");
  const auto entries = load_samples(path, collect());
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].programs[1].source, "x = 2");
  const auto bench = make_samples(3);
  EXPECT_EQ(code_of([&] { join_archive(bench, entries, "m1"); }), ErrorCode::kJoinError);
  EXPECT_TRUE(join_archive(bench, entries, "other-model").empty());
}

TEST_F(DatasetIoTest, ArchiveRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> prob(0.01, 1.0);
  std::vector<SampleArchiveEntry> entries;
  for (int k = 0; k < 10; ++k) {
    SampleArchiveEntry e;
    e.id = "id-" + std::to_string(k);
    e.model = "m";
    if (k % 2) e.language = Language::kJava;
    if (k % 3) e.requirement = "req " + std::to_string(k);
    e.prompt_version = "zero-shot-v1";
    for (int p = 0; p < 1 + k % 4; ++p) {
      ArchivedProgram program;
      program.source = "print(" + std::to_string(p) + ")\n\t# ünïcode";
      program.temperature = 0.2 * p;
      if (p % 2) program.token_probs = std::vector<double>{prob(rng), prob(rng)};
      if (k % 2) program.passed = p % 3 == 0;
      program.unfenced = p == 2;
      e.programs.push_back(program);
    }
    entries.push_back(e);
  }
  for (const char* name : {"a.jsonl", "a.jsonl.gz"}) {
    save_samples(dir_ / name, entries);
    EXPECT_EQ(load_samples(dir_ / name, collect()), entries);
  }
  EXPECT_TRUE(warnings_.empty());
}

TEST_F(DatasetIoTest, ReportAndWeightsRoundTrip) {
  ConfidenceReport report = build_report("r", 3, {0.1, 0.2, 0.3, 0.4}, [](std::size_t i, std::size_t j) {
    const double v = 0.1 * static_cast<double>(i + 1) + 0.01 * static_cast<double>(j);
    return ModalityScores{v, v / 2, v / 3, 1.0 / 3.0};
  });
  write_json_lines(dir_ / "r.jsonl", {to_json(report, "m1")});
  const auto loaded = load_reports(dir_ / "r.jsonl");
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].confidence, report.confidence);
  EXPECT_EQ(loaded[0].weights, report.weights);
  EXPECT_EQ(loaded[0].recompute_confidence(), report.confidence);
  EXPECT_EQ(loaded[0].at(2, 1).scores, report.at(2, 1).scores);

  save_weights(dir_ / "w.json", {{0.05, 0.15, 0.3, 0.5}, 0.875, 1771});
  EXPECT_EQ(load_weights(dir_ / "w.json"), (SimilarityWeights{0.05, 0.15, 0.3, 0.5}));
  write("bad.json", R"({"alpha":0.5,"beta":0.5,"gamma":0.5,"delta":0})");
  EXPECT_EQ(code_of([&] { load_weights(dir_ / "bad.json"); }), ErrorCode::kInvalidWeights);
}

TEST_F(DatasetIoTest, AtomicWriteLeavesNoTemporaries) {
  save_benchmark(dir_ / "b.jsonl", make_samples(3));
  save_benchmark(dir_ / "b.jsonl", make_samples(4));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir_)) ++files;
  EXPECT_EQ(files, 1u);
  EXPECT_EQ(load_benchmark(dir_ / "b.jsonl", collect()).size(), 4u);
}

}  // namespace
}  // namespace honest
