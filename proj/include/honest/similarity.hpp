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

// Pairwise program similarity in four modalities and their weighted mix.
// Every ratio is directional: the denominator always comes from the second
// argument (c_j), so sim(i, j) and sim(j, i) may differ.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>

#include "honest/dataflow.hpp"
#include "honest/embeddings.hpp"
#include "honest/error.hpp"
#include "honest/program.hpp"
#include "honest/subtrees.hpp"

namespace honest {

inline constexpr int kMaxNGram = 4;

/// n-gram multisets of one token sequence for n = 1..4.
struct NGramProfile {
  std::array<std::map<std::string, std::size_t>, kMaxNGram> counts;
  std::array<std::size_t, kMaxNGram> totals{};

  static NGramProfile of(const TokenSequence& sequence) {
    NGramProfile profile;
    const auto& tokens = sequence.tokens;
    for (int n = 1; n <= kMaxNGram; ++n) {
      if (tokens.size() < static_cast<std::size_t>(n)) break;
      auto& counts = profile.counts[n - 1];
      for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
        std::string key = tokens[start];
        for (int k = 1; k < n; ++k) {
          key += '\x1f';
          key += tokens[start + k];
        }
        ++counts[key];
      }
      profile.totals[n - 1] = tokens.size() - n + 1;
    }
    return profile;
  }
};

/// Sum over keys of min(count in a, count in b).
template <typename Key>
std::size_t clipped_overlap(const std::map<Key, std::size_t>& a, const std::map<Key, std::size_t>& b) {
  // Walk the smaller map, probe the larger.
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  std::size_t overlap = 0;
  for (const auto& [key, count] : small) {
    if (auto it = large.find(key); it != large.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

/// Geometric mean over n = 1..4 of clipped n-gram overlap / n-grams in j.
/// Orders where j has no n-grams are dropped and the mean renormalized; a
/// j with no tokens scores 1 against an empty i and 0 otherwise. Any kept
/// order with zero overlap gives 0.
inline double sim_text(const NGramProfile& profile_i, const NGramProfile& profile_j) {
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 0; n < kMaxNGram; ++n) {
    const std::size_t denominator = profile_j.totals[n];
    if (denominator == 0) continue;
    const std::size_t overlap = clipped_overlap(profile_i.counts[n], profile_j.counts[n]);
    if (overlap == 0) return 0.0;
    log_sum += std::log(static_cast<double>(overlap) / static_cast<double>(denominator));
    ++orders;
  }
  if (orders == 0) return profile_i.totals[0] == 0 ? 1.0 : 0.0;
  return std::exp(log_sum / orders);
}

inline double sim_text(const TokenSequence& seq_i, const TokenSequence& seq_j) {
  return sim_text(NGramProfile::of(seq_i), NGramProfile::of(seq_j));
}

namespace detail {

template <typename Key>
double directed_overlap_ratio(const std::map<Key, std::size_t>& bag_i, std::size_t total_i,
                              const std::map<Key, std::size_t>& bag_j, std::size_t total_j) {
  if (total_j == 0) return total_i == 0 ? 1.0 : 0.0;
  return static_cast<double>(clipped_overlap(bag_i, bag_j)) / static_cast<double>(total_j);
}

}  // namespace detail

/// |bag_i ∩ bag_j| / |bag_j| under clipped multiset intersection.
inline double sim_syntax(const SubtreeBag& bag_i, const SubtreeBag& bag_j) {
  return detail::directed_overlap_ratio(bag_i.entries, bag_i.total(), bag_j.entries, bag_j.total());
}

/// |edges_i ∩ edges_j| / |edges_j|; two empty graphs score 1.
inline double sim_dataflow(const DataflowGraph& dfg_i, const DataflowGraph& dfg_j) {
  return detail::directed_overlap_ratio(dfg_i.edges, dfg_i.total(), dfg_j.edges, dfg_j.total());
}

inline double sim_embed(const EmbeddingVector& e_i, const EmbeddingVector& e_j) {
  return cosine(e_i, e_j);
}

/// Mixing weights for the four modalities; each in [0, 1], summing to 1.
struct SimilarityWeights {
  double alpha = 0.25;  // text
  double beta = 0.25;   // syntax
  double gamma = 0.25;  // dataflow
  double delta = 0.25;  // embedding

  static constexpr SimilarityWeights uniform() { return {}; }

  void validate() const {
    for (double w : {alpha, beta, gamma, delta}) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw Error(ErrorCode::kInvalidWeights, "each weight must lie in [0, 1]");
      }
    }
    if (std::abs(alpha + beta + gamma + delta - 1.0) > 1e-9) {
      throw Error(ErrorCode::kInvalidWeights, "weights must sum to 1");
    }
  }

  bool operator==(const SimilarityWeights&) const = default;
};

/// The four per-modality similarities of one ordered pair.
struct ModalityScores {
  double text = 0.0;
  double syntax = 0.0;
  double dataflow = 0.0;
  double embedding = 0.0;

  bool operator==(const ModalityScores&) const = default;
};

inline double sim_hybrid(const ModalityScores& components, const SimilarityWeights& w) {
  for (double c : {components.text, components.syntax, components.dataflow, components.embedding}) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw Error(ErrorCode::kComponentOutOfRange, "modality similarity outside [0, 1]");
    }
  }
  const double mixed = w.alpha * components.text + w.beta * components.syntax + w.gamma * components.dataflow +
                       w.delta * components.embedding;
  return std::clamp(mixed, 0.0, 1.0);
}

/// Similarities of the ordered pair (i, j) plus their hybrid.
struct SimilarityBreakdown {
  std::size_t i = 0;
  std::size_t j = 0;
  ModalityScores scores;
  double hybrid = 0.0;
};

}  // namespace honest
