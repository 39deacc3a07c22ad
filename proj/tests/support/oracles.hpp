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

// Brute-force reference computations used only by tests. Nothing here calls
// into the library's metric code.

#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace honest::oracle {

using Tokens = std::vector<std::string>;

inline std::vector<Tokens> ngrams(const Tokens& tokens, std::size_t n) {
  std::vector<Tokens> out;
  for (std::size_t s = 0; s + n <= tokens.size(); ++s) {
    out.emplace_back(tokens.begin() + static_cast<long>(s), tokens.begin() + static_cast<long>(s + n));
  }
  return out;
}

/// Text similarity by explicit enumeration: for each distinct n-gram of j,
/// count its occurrences in i and j by linear scan and clip.
inline double text_similarity(const Tokens& i, const Tokens& j) {
  double log_sum = 0.0;
  int orders = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto grams_j = ngrams(j, n);
    if (grams_j.empty()) continue;
    const auto grams_i = ngrams(i, n);
    std::set<Tokens> distinct(grams_j.begin(), grams_j.end());
    long overlap = 0;
    for (const auto& g : distinct) {
      const long in_i = std::count(grams_i.begin(), grams_i.end(), g);
      const long in_j = std::count(grams_j.begin(), grams_j.end(), g);
      overlap += std::min(in_i, in_j);
    }
    if (overlap == 0) return 0.0;
    log_sum += std::log(static_cast<double>(overlap) / static_cast<double>(grams_j.size()));
    ++orders;
  }
  if (orders == 0) return i.empty() ? 1.0 : 0.0;
  return std::exp(log_sum / orders);
}

/// AUROC as the share of (positive, negative) pairs ranked correctly, ties
/// worth one half.
inline double pairwise_auroc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  long long twice_wins = 0;
  long long pairs = 0;
  for (std::size_t p = 0; p < scores.size(); ++p) {
    if (!positive[p]) continue;
    for (std::size_t q = 0; q < scores.size(); ++q) {
      if (positive[q]) continue;
      ++pairs;
      if (scores[p] > scores[q]) twice_wins += 2;
      if (scores[p] == scores[q]) twice_wins += 1;
    }
  }
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pairs));
}

/// Average precision by sweeping every distinct score as a threshold
/// (predict positive iff score >= t) from high to low and summing
/// (recall step) * precision.
inline double threshold_average_precision(const std::vector<double>& scores, const std::vector<bool>& positive) {
  std::vector<double> thresholds(scores.begin(), scores.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  const double total_positive = static_cast<double>(std::count(positive.begin(), positive.end(), true));
  double ap = 0.0;
  double previous_recall = 0.0;
  for (double t : thresholds) {
    double tp = 0.0;
    double fp = 0.0;
    for (std::size_t k = 0; k < scores.size(); ++k) {
      if (scores[k] >= t) (positive[k] ? tp : fp) += 1.0;
    }
    const double recall = tp / total_positive;
    const double precision = tp + fp > 0 ? tp / (tp + fp) : 1.0;
    ap += (recall - previous_recall) * precision;
    previous_recall = recall;
  }
  return ap;
}

}  // namespace honest::oracle
