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

#include "honest/evaluation.hpp"
#include "support/oracles.hpp"

namespace honest {
namespace {

constexpr Outcome P = Outcome::kPassed;
constexpr Outcome F = Outcome::kFailed;

std::vector<ScoredSample> make(const std::vector<double>& scores, const std::vector<Outcome>& labels) {
  std::vector<ScoredSample> out;
  for (std::size_t k = 0; k < scores.size(); ++k) out.push_back({std::to_string(k), scores[k], labels[k], {}, {}});
  return out;
}

struct RandomDataset {
  std::vector<double> scores;
  std::vector<bool> positive;
  std::vector<ScoredSample> samples;
};

/// Random sizes up to 200 with coarse score levels so ties are common.
std::vector<RandomDataset> random_datasets(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RandomDataset> out;
  while (static_cast<int>(out.size()) < count) {
    RandomDataset d;
    const int n = std::uniform_int_distribution<int>(2, 200)(rng);
    const int levels = std::uniform_int_distribution<int>(2, 50)(rng);
    const double base_rate = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    for (int k = 0; k < n; ++k) {
      const bool pos = std::bernoulli_distribution(base_rate)(rng);
      const int level = std::uniform_int_distribution<int>(0, levels - 1)(rng);
      d.scores.push_back(static_cast<double>(level) / levels);
      d.positive.push_back(pos);
      d.samples.push_back({std::to_string(k), d.scores.back(), pos ? P : F, {}, {}});
    }
    const auto positives = std::count(d.positive.begin(), d.positive.end(), true);
    if (positives == 0 || positives == n) continue;
    out.push_back(std::move(d));
  }
  return out;
}

TEST(AurocTest, Examples) {
  EXPECT_EQ(auroc(make({0.9, 0.8, 0.3, 0.2}, {P, P, F, F})), 1.0);
  EXPECT_EQ(auroc(make({0.9, 0.8, 0.3, 0.2}, {F, P, F, P})), 0.25);
  EXPECT_EQ(oracle::pairwise_auroc({0.9, 0.8, 0.3, 0.2}, {false, true, false, true}), 0.25);
  EXPECT_EQ(auroc(make({0.4, 0.4, 0.4, 0.4}, {F, P, F, P})), 0.5);
}

TEST(AurocTest, SingleClass) {
  try {
    auroc(make({0.1, 0.2}, {P, P}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
}

TEST(AurocTest, MatchesPairwiseOracle) {
  for (const auto& d : random_datasets(100, 1)) {
    EXPECT_NEAR(auroc(d.samples), oracle::pairwise_auroc(d.scores, d.positive), 1e-12);
  }
}

TEST(AurocTest, LabelReversalAndMonotoneTransforms) {
  for (const auto& d : random_datasets(100, 2)) {
    const double a = auroc(d.samples);
    auto reversed = d.samples;
    for (auto& s : reversed) s.label = s.label == P ? F : P;
    EXPECT_NEAR(auroc(reversed), 1.0 - a, 1e-12);
    auto transformed = d.samples;
    for (auto& s : transformed) s.score = std::exp(3.0 * s.score) - 7.0;
    EXPECT_EQ(auroc(transformed), a);
  }
}

TEST(AucprTest, Examples) {
  EXPECT_EQ(aucpr(make({0.9, 0.8, 0.3, 0.2}, {P, P, F, F})), 1.0);
  EXPECT_EQ(aucpr(make({0.9, 0.5, 0.1}, {P, P, P})), 1.0);
  const double value = aucpr(make({0.9, 0.8, 0.3}, {F, P, P}));
  EXPECT_NEAR(value, oracle::threshold_average_precision({0.9, 0.8, 0.3}, {false, true, true}), 1e-12);
  // By hand: recall 0.5 at precision 1/2, then recall 1 at precision 2/3.
  EXPECT_NEAR(value, 0.5 * 0.5 + 0.5 * 2.0 / 3.0, 1e-12);
  try {
    aucpr(make({0.1, 0.2}, {F, F}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoPositives);
  }
}

TEST(AucprTest, MatchesThresholdEnumerationOracle) {
  for (const auto& d : random_datasets(100, 1)) {
    EXPECT_NEAR(aucpr(d.samples), oracle::threshold_average_precision(d.scores, d.positive), 1e-9);
  }
}

TEST(AucprTest, IndependentOfInputOrderAndBounded) {
  std::mt19937_64 rng(4);
  for (auto d : random_datasets(30, 3)) {
    const double a = aucpr(d.samples);
    std::shuffle(d.samples.begin(), d.samples.end(), rng);
    EXPECT_EQ(aucpr(d.samples), a);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
    const double t = aucpr_trapezoid(d.samples);
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 1.0);
  }
}

TEST(RocCurveTest, EndsAtOneOne) {
  const auto curve = roc_curve(make({0.9, 0.8, 0.3, 0.2}, {F, P, F, P}));
  EXPECT_EQ(curve.front().fpr, 0.0);
  EXPECT_EQ(curve.back().fpr, 1.0);
  EXPECT_EQ(curve.back().tpr, 1.0);
  double area = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    area += (curve[k].fpr - curve[k - 1].fpr) * (curve[k].tpr + curve[k - 1].tpr) / 2.0;
  }
  EXPECT_NEAR(area, 0.25, 1e-12);
}

TEST(ConfusionTest, Examples) {
  const auto perfect = confusion(make({0.9, 0.8, 0.3, 0.2}, {P, P, F, F}), 0.5);
  EXPECT_EQ(*perfect.tpr, 1.0);
  EXPECT_EQ(*perfect.fpr, 0.0);

  const auto none = confusion(make({0.1, 0.2}, {P, F}), 0.5);
  EXPECT_EQ(none.tp, 0u);
  EXPECT_EQ(none.fp, 0u);
  EXPECT_FALSE(none.precision.has_value());
  EXPECT_EQ(*none.recall, 0.0);

  const auto mixed = confusion(make({0.9, 0.8, 0.7, 0.1}, {P, P, F, F}), 0.5);
  EXPECT_EQ(mixed.tp, 2u);
  EXPECT_EQ(mixed.fp, 1u);
  EXPECT_EQ(mixed.tn, 1u);
  EXPECT_EQ(mixed.fn, 0u);
  EXPECT_DOUBLE_EQ(*mixed.precision, 2.0 / 3.0);
  EXPECT_EQ(*mixed.recall, 1.0);

  EXPECT_EQ(confusion(make({0.5}, {P}), 0.5).tp, 0u);
  EXPECT_FALSE(confusion(make({0.9}, {P}), 0.5).fpr.has_value());
}

std::vector<ScoredSample> counted(const std::vector<double>& scores, const std::vector<std::pair<int, int>>& counts) {
  std::vector<ScoredSample> out;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out.push_back({std::to_string(k), scores[k], counts[k].first > 0 ? P : F, counts[k].first, counts[k].second});
  }
  return out;
}

TEST(SweepTest, SingleSampleAccounting) {
  const auto one = counted({0.5}, {{3, 5}});
  const auto below = shown_counts(one, 0.4);
  EXPECT_EQ(below.shown_correct, 3);
  EXPECT_EQ(below.shown_erroneous, 2);
  const auto above = shown_counts(one, 0.6);
  EXPECT_EQ(above.shown_correct, 0);
  EXPECT_EQ(above.shown_erroneous, 0);
}

TEST(SweepTest, StraddlingSamplesMatchEnumeration) {
  const auto two = counted({0.2, 0.8}, {{1, 4}, {3, 4}});
  const auto sweep = threshold_sweep(two, 100);
  ASSERT_EQ(sweep.size(), 100u);
  for (const auto& point : sweep) {
    long long correct = 0;
    long long wrong = 0;
    for (const auto& s : two) {
      if (s.score > point.threshold) {
        correct += *s.programs_correct;
        wrong += *s.programs_total - *s.programs_correct;
      }
    }
    EXPECT_EQ(point.shown_correct, correct);
    EXPECT_EQ(point.shown_erroneous, wrong);
  }
  EXPECT_EQ(sweep[50].shown_correct, 3);
  EXPECT_EQ(sweep[50].shown_erroneous, 1);
}

TEST(SweepTest, RangeEndpointsAndMonotonicity) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores;
    std::vector<std::pair<int, int>> counts;
    long long total_correct = 0;
    long long total_wrong = 0;
    for (int k = 0; k < 40; ++k) {
      scores.push_back(std::uniform_real_distribution<double>(-2.0, 3.0)(rng));
      const int total = std::uniform_int_distribution<int>(1, 20)(rng);
      const int correct = std::uniform_int_distribution<int>(0, total)(rng);
      counts.emplace_back(correct, total);
      total_correct += correct;
      total_wrong += total - correct;
    }
    const auto sweep = threshold_sweep(counted(scores, counts));
    ASSERT_EQ(sweep.size(), 100u);
    EXPECT_EQ(sweep.front().shown_correct, total_correct);
    EXPECT_EQ(sweep.front().shown_erroneous, total_wrong);
    EXPECT_EQ(sweep.back().threshold, *std::max_element(scores.begin(), scores.end()));
    EXPECT_EQ(sweep.back().shown_correct + sweep.back().shown_erroneous, 0);
    for (std::size_t k = 1; k < sweep.size(); ++k) {
      EXPECT_GT(sweep[k].threshold, sweep[k - 1].threshold);
      EXPECT_LE(sweep[k].shown_correct, sweep[k - 1].shown_correct);
      EXPECT_LE(sweep[k].shown_erroneous, sweep[k - 1].shown_erroneous);
    }
  }
}

TEST(SweepTest, RequiresProgramCounts) {
  try {
    threshold_sweep(make({0.1, 0.2}, {P, F}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingProgramCounts);
  }
}

}  // namespace
}  // namespace honest
