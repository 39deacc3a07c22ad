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

#include <gtest/gtest.h>

#include "honest/gate.hpp"

namespace honest {
namespace {

SampleSet samples(std::size_t n, std::string id = "req-1") {
  SampleSet set{std::move(id), "requirement", {}};
  for (std::size_t k = 0; k < n; ++k) {
    set.programs.push_back({"x = " + std::to_string(k), Language::kPython, std::nullopt});
  }
  return set;
}

TEST(GateTest, ShowsAllProgramsAboveThreshold) {
  const auto d = decide(0.7, samples(20), 0.5);
  EXPECT_EQ(d.verdict, Verdict::kShow);
  EXPECT_EQ(d.programs.size(), 20u);
  EXPECT_EQ(d.programs[3].source, "x = 3");
  EXPECT_TRUE(d.message.empty());
}

TEST(GateTest, RefusesBelowThresholdWithDefaultMessage) {
  const auto d = decide(0.3, samples(20), 0.5);
  EXPECT_EQ(d.verdict, Verdict::kRefuse);
  EXPECT_EQ(d.message, "Sorry, I cannot solve this requirement.");
  EXPECT_TRUE(d.programs.empty());
}

TEST(GateTest, EqualityRefuses) { EXPECT_EQ(decide(0.5, samples(3), 0.5).verdict, Verdict::kRefuse); }

TEST(GateTest, CustomMessageAndTop) {
  GateOptions options;
  options.refusal_message = "No answer.";
  options.top = 2;
  EXPECT_EQ(decide(0.1, samples(5), 0.5, options).message, "No answer.");
  const auto shown = decide(0.9, samples(5), 0.5, options);
  EXPECT_EQ(shown.programs.size(), 2u);
  EXPECT_EQ(shown.programs[1].source, "x = 1");
}

TEST(GateTest, MonotoneInThreshold) {
  for (double c = 0.0; c <= 1.0; c += 0.05) {
    bool refused = false;
    for (int t = 0; t <= 100; ++t) {
      const auto v = decide(c, samples(2), t / 100.0).verdict;
      if (refused) {
        EXPECT_EQ(v, Verdict::kRefuse) << "c=" << c << " t=" << t;
      }
      refused = refused || v == Verdict::kRefuse;
      EXPECT_EQ(v == Verdict::kShow, c > t / 100.0);
    }
  }
}

TEST(GateTest, RejectsThresholdOutsideUnitInterval) {
  EXPECT_THROW(decide(0.5, samples(2), 1.5), Error);
  EXPECT_THROW(decide(0.5, samples(2), -0.1), Error);
}

TEST(GateTest, ReportMustMatchSamples) {
  ConfidenceReport report;
  report.requirement_id = "other";
  report.confidence = 0.9;
  try {
    decide(report, samples(2), 0.5);
    FAIL() << "expected IdMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIdMismatch);
  }
  report.requirement_id = "req-1";
  EXPECT_EQ(decide(report, samples(2), 0.5).verdict, Verdict::kShow);
}

TEST(GateTest, JsonShape) {
  const auto shown = to_json(decide(0.8, samples(2), 0.5));
  EXPECT_EQ(shown["requirement_id"], "req-1");
  EXPECT_EQ(shown["verdict"], "show");
  EXPECT_EQ(shown["confidence"], 0.8);
  EXPECT_EQ(shown["threshold"], 0.5);
  EXPECT_EQ(shown["programs"], nlohmann::json::array({"x = 0", "x = 1"}));
  EXPECT_TRUE(shown["message"].is_null());

  const auto refused = to_json(decide(0.2, samples(2), 0.5));
  EXPECT_EQ(refused["verdict"], "refuse");
  EXPECT_TRUE(refused["programs"].is_null());
  EXPECT_EQ(refused["message"], kDefaultRefusal);
  EXPECT_EQ(refused.size(), 6u);
}

}  // namespace
}  // namespace honest
