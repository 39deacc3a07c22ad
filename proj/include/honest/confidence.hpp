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

// Confidence of a model in one requirement: the mean hybrid similarity over
// all N(N-1) ordered pairs of its sampled programs. Also the grid search that
// fits the modality weights on labeled training data.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "honest/dataflow.hpp"
#include "honest/embeddings.hpp"
#include "honest/error.hpp"
#include "honest/evaluation.hpp"
#include "honest/parallel.hpp"
#include "honest/program.hpp"
#include "honest/similarity.hpp"
#include "honest/subtrees.hpp"
#include "honest/syntax_tree.hpp"
#include "honest/tokenize.hpp"

namespace honest {

/// Everything the pairwise similarities need from one program, computed once.
struct ProgramAnalysis {
  TokenSequence tokens;
  NGramProfile ngrams;
  SubtreeBag subtrees;
  DataflowGraph dataflow;
  EmbeddingVector embedding;
};

inline ProgramAnalysis analyze(const Program& program, EmbeddingProvider& provider,
                               int subtree_height = kDefaultSubtreeHeight) {
  ProgramAnalysis analysis;
  const SyntaxTree tree = parse_cst(program);
  analysis.tokens = tokenize(tree);
  analysis.ngrams = NGramProfile::of(analysis.tokens);
  analysis.subtrees = extract_subtrees(tree, subtree_height);
  analysis.dataflow = extract_dataflow(tree);
  analysis.embedding = provider.embed(program);
  return analysis;
}

inline ModalityScores modality_scores(const ProgramAnalysis& a_i, const ProgramAnalysis& a_j) {
  return {sim_text(a_i.ngrams, a_j.ngrams), sim_syntax(a_i.subtrees, a_j.subtrees),
          sim_dataflow(a_i.dataflow, a_j.dataflow), sim_embed(a_i.embedding, a_j.embedding)};
}

struct ConfidenceReport {
  std::string requirement_id;
  std::size_t n = 0;
  SimilarityWeights weights;
  /// Row-major N x N; entry (i, j) holds Sim(c_i, c_j). Diagonal unused.
  std::vector<SimilarityBreakdown> pair_sims;
  double confidence = 0.0;

  const SimilarityBreakdown& at(std::size_t i, std::size_t j) const { return pair_sims[i * n + j]; }

  /// SUM(hybrids) / LEN(hybrids) over i != j, in row-major order.
  double recompute_confidence() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        sum += at(i, j).hybrid;
        ++count;
      }
    }
    return sum / static_cast<double>(count);
  }

  /// Per-modality means over the ordered pairs. Because the hybrid is linear
  /// in the weights, re-mixing these equals recomputing the confidence.
  ModalityScores mean_scores() const {
    ModalityScores mean;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto& s = at(i, j).scores;
        mean.text += s.text;
        mean.syntax += s.syntax;
        mean.dataflow += s.dataflow;
        mean.embedding += s.embedding;
        ++count;
      }
    }
    const double c = static_cast<double>(count);
    return {mean.text / c, mean.syntax / c, mean.dataflow / c, mean.embedding / c};
  }
};

struct EstimateOptions {
  int workers = default_workers();
  int subtree_height = kDefaultSubtreeHeight;
};

/// Builds the report from any ordered-pair scorer. Pairs are scored in
/// parallel; the aggregate is always summed in row-major order.
inline ConfidenceReport build_report(std::string requirement_id, std::size_t n,
                                     const SimilarityWeights& weights,
                                     const std::function<ModalityScores(std::size_t, std::size_t)>& pair_scores,
                                     int workers = 1) {
  if (n < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "requirement '" + requirement_id + "' needs at least 2 programs");
  }
  weights.validate();
  ConfidenceReport report;
  report.requirement_id = std::move(requirement_id);
  report.n = n;
  report.weights = weights;
  report.pair_sims.resize(n * n);
  parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto& cell = report.pair_sims[i * n + j];
      cell.i = i;
      cell.j = j;
      if (i == j) continue;
      cell.scores = pair_scores(i, j);
      cell.hybrid = sim_hybrid(cell.scores, weights);
    }
  });
  report.confidence = report.recompute_confidence();
  return report;
}

inline ConfidenceReport estimate_confidence(const std::vector<ProgramAnalysis>& analyses,
                                            std::string requirement_id,
                                            const SimilarityWeights& weights, int workers = 1) {
  return build_report(std::move(requirement_id), analyses.size(), weights,
                      [&](std::size_t i, std::size_t j) {
                        return modality_scores(analyses[i], analyses[j]);
                      },
                      workers);
}

inline std::vector<ProgramAnalysis> analyze_all(const SampleSet& samples, EmbeddingProvider& provider,
                                                const EstimateOptions& options = {}) {
  std::vector<ProgramAnalysis> analyses(samples.programs.size());
  parallel_for(samples.programs.size(), options.workers, [&](std::size_t k) {
    analyses[k] = analyze(samples.programs[k], provider, options.subtree_height);
  });
  return analyses;
}

/// Confidence for one requirement. Each program is tokenized, parsed and
/// embedded once; the N(N-1) pairs reuse those analyses.
inline ConfidenceReport estimate_confidence(const SampleSet& samples, const SimilarityWeights& weights,
                                            EmbeddingProvider& provider,
                                            const EstimateOptions& options = {}) {
  validate_for_estimation(samples);
  weights.validate();
  const auto analyses = analyze_all(samples, provider, options);
  return estimate_confidence(analyses, samples.requirement_id, weights, options.workers);
}

inline ConfidenceReport estimate_confidence(const SampleSet& samples, const SimilarityWeights& weights,
                                            const EmbeddingProviderConfig& provider_config,
                                            const EstimateOptions& options = {}) {
  auto provider = make_provider(provider_config);
  return estimate_confidence(samples, weights, *provider, options);
}

// ---------------------------------------------------------------------------
// Weight tuning

/// Grid resolution: weights are multiples of 1/kWeightGridSteps.
inline constexpr int kWeightGridSteps = 20;

struct TuningResult {
  SimilarityWeights weights;
  double train_auroc = 0.0;
  int grid_points_evaluated = 0;
};

/// Training example reduced to its per-modality mean similarities.
struct LabeledModalities {
  std::string id;
  ModalityScores mean_scores;
  Outcome label = Outcome::kFailed;
};

/// All non-negative 4-tuples of multiples of 0.05 summing to 1, in
/// lexicographic order of (alpha, beta, gamma, delta).
inline std::vector<SimilarityWeights> weight_grid() {
  std::vector<SimilarityWeights> grid;
  constexpr double step = kWeightGridSteps;
  for (int a = 0; a <= kWeightGridSteps; ++a) {
    for (int b = 0; a + b <= kWeightGridSteps; ++b) {
      for (int c = 0; a + b + c <= kWeightGridSteps; ++c) {
        const int d = kWeightGridSteps - a - b - c;
        grid.push_back({a / step, b / step, c / step, d / step});
      }
    }
  }
  return grid;
}

inline double mix(const ModalityScores& s, const SimilarityWeights& w) {
  return w.alpha * s.text + w.beta * s.syntax + w.gamma * s.dataflow + w.delta * s.embedding;
}

/// Exhaustive simplex grid; returns the AUROC maximizer, ties going to the
/// lexicographically smallest (alpha, beta, gamma, delta).
inline TuningResult tune_weights(const std::vector<LabeledModalities>& train, int workers = default_workers()) {
  bool has_passed = false;
  bool has_failed = false;
  for (const auto& example : train) {
    (example.label == Outcome::kPassed ? has_passed : has_failed) = true;
  }
  if (!has_passed || !has_failed) {
    throw Error(ErrorCode::kDegenerateLabels, "training data needs both passed and failed labels");
  }
  const auto grid = weight_grid();
  std::vector<double> scores(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t g) {
    std::vector<ScoredSample> scored;
    scored.reserve(train.size());
    for (const auto& example : train) {
      scored.push_back({example.id, mix(example.mean_scores, grid[g]), example.label, {}, {}});
    }
    scores[g] = auroc(scored);
  });
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (scores[g] > scores[best]) best = g;
  }
  return {grid[best], scores[best], static_cast<int>(grid.size())};
}

/// Tunes on raw sample sets: modality similarities are computed once per set
/// and re-mixed for every grid point.
inline TuningResult tune_weights(const std::vector<std::pair<SampleSet, Outcome>>& train,
                                 EmbeddingProvider& provider, const EstimateOptions& options = {}) {
  std::vector<LabeledModalities> reduced;
  reduced.reserve(train.size());
  for (const auto& [samples, label] : train) {
    validate_for_estimation(samples);
    const auto report = estimate_confidence(samples, SimilarityWeights::uniform(), provider, options);
    reduced.push_back({samples.requirement_id, report.mean_scores(), label});
  }
  return tune_weights(reduced, options.workers);
}

}  // namespace honest
