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

// Ranking metrics for confidence scores against passed/failed labels.
// "Passed" is the positive class. A sample is predicted passed iff its score
// is strictly greater than the threshold, matching the gate.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "honest/error.hpp"
#include "honest/program.hpp"

namespace honest {

struct ScoredSample {
  std::string id;
  double score = 0.0;
  Outcome label = Outcome::kFailed;
  std::optional<int> programs_correct;
  std::optional<int> programs_total;
};

namespace detail {

struct ClassCounts {
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
};

inline ClassCounts count_classes(std::span<const ScoredSample> scored) {
  ClassCounts counts;
  for (const auto& s : scored) {
    if (s.label == Outcome::kPassed) {
      ++counts.passed;
    } else {
      ++counts.failed;
    }
  }
  return counts;
}

// Indices ordered by descending score; equal scores keep input order.
inline std::vector<std::size_t> descending_order(std::span<const ScoredSample> scored) {
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scored[a].score > scored[b].score; });
  return order;
}

}  // namespace detail

/// Mann-Whitney form: the fraction of (passed, failed) pairs where the passed
/// sample scores higher, ties counting one half. Accumulated in integers
/// (twice the U statistic), so the only rounding is the final division.
inline double auroc(std::span<const ScoredSample> scored) {
  const auto classes = detail::count_classes(scored);
  if (classes.passed == 0 || classes.failed == 0) {
    throw Error(ErrorCode::kSingleClass, "AUROC needs both passed and failed labels");
  }
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scored[a].score < scored[b].score; });
  std::uint64_t twice_u = 0;
  std::uint64_t failed_below = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    std::uint64_t group_passed = 0;
    std::uint64_t group_failed = 0;
    while (end < order.size() && scored[order[end]].score == scored[order[start]].score) {
      if (scored[order[end]].label == Outcome::kPassed) {
        ++group_passed;
      } else {
        ++group_failed;
      }
      ++end;
    }
    twice_u += 2 * group_passed * failed_below + group_passed * group_failed;
    failed_below += group_failed;
    start = end;
  }
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(classes.passed) *
                                         static_cast<double>(classes.failed));
}

struct PrPoint {
  double threshold;
  double recall;
  double precision;
};

/// One point per distinct score, from the highest score down: the precision
/// and recall of predicting "passed" for every sample scoring at least that
/// value.
inline std::vector<PrPoint> pr_curve(std::span<const ScoredSample> scored) {
  const auto classes = detail::count_classes(scored);
  if (classes.passed == 0) throw Error(ErrorCode::kNoPositives, "PR curve needs a passed label");
  const auto order = detail::descending_order(scored);
  std::vector<PrPoint> points;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    const double score = scored[order[start]].score;
    while (end < order.size() && scored[order[end]].score == score) {
      if (scored[order[end]].label == Outcome::kPassed) {
        ++tp;
      } else {
        ++fp;
      }
      ++end;
    }
    points.push_back({score, static_cast<double>(tp) / static_cast<double>(classes.passed),
                      static_cast<double>(tp) / static_cast<double>(tp + fp)});
    start = end;
  }
  return points;
}

/// Average precision: sum over distinct score levels of
/// (recall gained at that level) * (precision at that level). Samples sharing a
/// score enter together, so the result does not depend on input order.
inline double aucpr(std::span<const ScoredSample> scored) {
  double area = 0.0;
  double previous_recall = 0.0;
  for (const auto& point : pr_curve(scored)) {
    area += (point.recall - previous_recall) * point.precision;
    previous_recall = point.recall;
  }
  return area;
}

/// Trapezoidal area under the PR curve, anchored at (recall 0, precision 1).
/// Exposed for comparison with tools that interpolate linearly.
inline double aucpr_trapezoid(std::span<const ScoredSample> scored) {
  double area = 0.0;
  double previous_recall = 0.0;
  double previous_precision = 1.0;
  for (const auto& point : pr_curve(scored)) {
    area += (point.recall - previous_recall) * (point.precision + previous_precision) / 2.0;
    previous_recall = point.recall;
    previous_precision = point.precision;
  }
  return area;
}

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

/// (FPR, TPR) per distinct score, starting from the origin.
inline std::vector<RocPoint> roc_curve(std::span<const ScoredSample> scored) {
  const auto classes = detail::count_classes(scored);
  if (classes.passed == 0 || classes.failed == 0) {
    throw Error(ErrorCode::kSingleClass, "ROC curve needs both passed and failed labels");
  }
  const auto order = detail::descending_order(scored);
  std::vector<RocPoint> points{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    const double score = scored[order[start]].score;
    while (end < order.size() && scored[order[end]].score == score) {
      if (scored[order[end]].label == Outcome::kPassed) {
        ++tp;
      } else {
        ++fp;
      }
      ++end;
    }
    points.push_back({score, static_cast<double>(fp) / static_cast<double>(classes.failed),
                      static_cast<double>(tp) / static_cast<double>(classes.passed)});
    start = end;
  }
  return points;
}

/// Confusion counts and rates at one threshold. Ratios with a zero
/// denominator are std::nullopt.
struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> precision;
  std::optional<double> recall;
};

inline Confusion confusion(std::span<const ScoredSample> scored, double threshold) {
  Confusion c;
  for (const auto& s : scored) {
    const bool predicted_passed = s.score > threshold;
    const bool passed = s.label == Outcome::kPassed;
    if (predicted_passed && passed) ++c.tp;
    if (predicted_passed && !passed) ++c.fp;
    if (!predicted_passed && !passed) ++c.tn;
    if (!predicted_passed && passed) ++c.fn;
  }
  auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  c.tpr = ratio(c.tp, c.tp + c.fn);
  c.fpr = ratio(c.fp, c.fp + c.tn);
  c.precision = ratio(c.tp, c.tp + c.fp);
  c.recall = c.tpr;
  return c;
}

struct SweepPoint {
  double threshold = 0.0;
  long long shown_correct = 0;
  long long shown_erroneous = 0;
};

/// Correct and erroneous programs shown when every sample scoring above
/// `threshold` is shown.
inline SweepPoint shown_counts(std::span<const ScoredSample> scored, double threshold) {
  SweepPoint point{threshold, 0, 0};
  for (const auto& s : scored) {
    if (!s.programs_correct || !s.programs_total) {
      throw Error(ErrorCode::kMissingProgramCounts, "sample '" + s.id + "' lacks program counts");
    }
    if (s.score > threshold) {
      point.shown_correct += *s.programs_correct;
      point.shown_erroneous += *s.programs_total - *s.programs_correct;
    }
  }
  return point;
}

/// `points` thresholds equally spaced over the observed score range. The
/// lowest threshold is the largest double below the minimum score, so the
/// first point shows everything (the show-everything baseline) and the last,
/// at the maximum score, shows nothing.
inline std::vector<SweepPoint> threshold_sweep(std::span<const ScoredSample> scored, int points = 100) {
  if (scored.empty()) throw Error(ErrorCode::kEmptyInput, "threshold sweep over no samples");
  if (points < 2) throw Error(ErrorCode::kInvalidArgument, "threshold sweep needs >= 2 points");
  for (const auto& s : scored) {
    if (!s.programs_correct || !s.programs_total) {
      throw Error(ErrorCode::kMissingProgramCounts, "sample '" + s.id + "' lacks program counts");
    }
  }
  const auto [min_it, max_it] = std::minmax_element(
      scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
  const double low = std::nextafter(min_it->score, -std::numeric_limits<double>::infinity());
  const double high = max_it->score;
  std::vector<SweepPoint> sweep;
  sweep.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    double t = k == points - 1 ? high : low + (high - low) * k / (points - 1);
    sweep.push_back(shown_counts(scored, t));
  }
  return sweep;
}

}  // namespace honest
