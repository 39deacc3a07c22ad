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

// Reference confidence estimators to compare against: token-probability
// aggregates, self-asking probes and nearest-neighbour label voting.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "honest/embeddings.hpp"
#include "honest/error.hpp"
#include "honest/evaluation.hpp"
#include "honest/llm_client.hpp"
#include "honest/program.hpp"
#include "honest/prompts.hpp"

namespace honest {

// ---------------------------------------------------------------------------
// Token probabilities

using TokenProbs = std::vector<double>;

namespace detail {

inline void require_probs(std::span<const TokenProbs> records) {
  if (records.empty()) throw Error(ErrorCode::kMissingLogprobs, "no generation records");
  for (const auto& probs : records) {
    if (probs.empty()) throw Error(ErrorCode::kMissingLogprobs, "record without token probabilities");
  }
}

}  // namespace detail

/// Mean of every token probability, pooled across records.
inline double avg_prob(std::span<const TokenProbs> records) {
  detail::require_probs(records);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& probs : records) {
    for (double p : probs) sum += p;
    count += probs.size();
  }
  return sum / static_cast<double>(count);
}

/// Product of token probabilities per record (taken in log space), averaged
/// over records.
inline double product_prob(std::span<const TokenProbs> records) {
  detail::require_probs(records);
  double sum = 0.0;
  for (const auto& probs : records) {
    double log_product = 0.0;
    for (double p : probs) log_product += std::log(p);
    sum += std::exp(log_product);
  }
  return sum / static_cast<double>(records.size());
}

inline std::vector<TokenProbs> token_probs_of(std::span<const GenerationRecord> records) {
  std::vector<TokenProbs> out;
  for (const auto& r : records) out.push_back(r.token_probs);
  return out;
}

inline std::vector<TokenProbs> token_probs_of(std::span<const Program> programs) {
  std::vector<TokenProbs> out;
  for (const auto& p : programs) {
    out.push_back(p.origin && p.origin->token_probs ? *p.origin->token_probs : TokenProbs{});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Self-asking

/// Mean P("Yes") over programs asked "is this code correct?".
inline double self_ask_code(LlmClient& client, std::string_view requirement,
                            std::span<const Program> programs) {
  if (programs.empty()) throw Error(ErrorCode::kEmptyInput, "self-ask (code) over no programs");
  double sum = 0.0;
  for (const auto& program : programs) {
    sum += client.ask_yes_no(prompts::code_judgment(requirement, program));
  }
  return sum / static_cast<double>(programs.size());
}

/// P("Yes") for "can you solve this requirement?".
inline double self_ask_requirement(LlmClient& client, std::string_view requirement, Language language) {
  return client.ask_yes_no(prompts::requirement_judgment(requirement, language));
}

// ---------------------------------------------------------------------------
// K-nearest-neighbour search

/// Lower-cased alphanumeric runs.
inline std::vector<std::string> requirement_terms(std::string_view text) {
  std::vector<std::string> terms;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      terms.push_back(std::exchange(current, {}));
    }
  }
  if (!current.empty()) terms.push_back(std::move(current));
  return terms;
}

/// Okapi BM25 over tokenized requirements, each carrying a passed/failed label.
class Bm25Index {
 public:
  struct Document {
    std::string id;
    std::unordered_map<std::string, std::size_t> term_freqs;
    std::size_t length = 0;
    Outcome label = Outcome::kFailed;
  };

  explicit Bm25Index(double k1 = 1.2, double b = 0.75) : k1_(k1), b_(b) {}

  void add(std::string id, const std::vector<std::string>& terms, Outcome label) {
    Document doc{std::move(id), {}, terms.size(), label};
    for (const auto& t : terms) ++doc.term_freqs[t];
    for (const auto& [term, _] : doc.term_freqs) ++doc_freqs_[term];
    total_length_ += doc.length;
    documents_.push_back(std::move(doc));
  }

  std::size_t size() const { return documents_.size(); }
  const Document& document(std::size_t index) const { return documents_.at(index); }
  double k1() const { return k1_; }
  double b() const { return b_; }

  double average_length() const {
    return documents_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(documents_.size());
  }

  std::size_t doc_freq(const std::string& term) const {
    auto it = doc_freqs_.find(term);
    return it == doc_freqs_.end() ? 0 : it->second;
  }

  /// ln(1 + (N - df + 0.5) / (df + 0.5))
  double idf(const std::string& term) const {
    const double n = static_cast<double>(documents_.size());
    const double df = static_cast<double>(doc_freq(term));
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
  }

  /// Recounts document frequencies from the stored documents.
  bool frequencies_consistent() const {
    std::unordered_map<std::string, std::size_t> recount;
    std::size_t length = 0;
    for (const auto& doc : documents_) {
      for (const auto& [term, _] : doc.term_freqs) ++recount[term];
      length += doc.length;
    }
    return recount == doc_freqs_ && length == total_length_;
  }

  double score(const std::vector<std::string>& query, std::size_t doc_index) const {
    if (doc_index >= documents_.size()) {
      throw Error(ErrorCode::kUnknownDocument, "document " + std::to_string(doc_index));
    }
    const auto& doc = documents_[doc_index];
    const double avg = average_length();
    const double norm = avg > 0.0 ? static_cast<double>(doc.length) / avg : 0.0;
    double total = 0.0;
    for (const auto& term : query) {
      auto it = doc.term_freqs.find(term);
      if (it == doc.term_freqs.end()) continue;
      const double tf = static_cast<double>(it->second);
      total += idf(term) * (tf * (k1_ + 1.0)) / (tf + k1_ * (1.0 - b_ + b_ * norm));
    }
    return total;
  }

 private:
  double k1_;
  double b_;
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::size_t> doc_freqs_;
  std::size_t total_length_ = 0;
};

inline double bm25_score(const std::vector<std::string>& query, const Bm25Index& index, std::size_t doc_index) {
  return index.score(query, doc_index);
}

/// Labeled requirement embeddings for the embedding-metric variant.
struct EmbeddingCorpus {
  std::vector<std::string> ids;
  std::vector<EmbeddingVector> vectors;
  std::vector<Outcome> labels;

  void add(std::string id, EmbeddingVector vector, Outcome label) {
    ids.push_back(std::move(id));
    vectors.push_back(std::move(vector));
    labels.push_back(label);
  }
  std::size_t size() const { return vectors.size(); }
};

enum class KnnMetric { kBm25, kEmbedding };

struct KnnConfig {
  int k = 5;
  KnnMetric metric = KnnMetric::kBm25;
};

inline constexpr std::array<int, 5> kKnnCandidateKs{1, 3, 5, 10, 20};

/// Fraction of passed labels among the k highest-scoring documents. Equal
/// scores keep corpus order; k is clamped to the number of candidates.
/// `exclude` drops one document (leave-one-out during tuning).
inline double knn_vote(std::span<const double> scores, std::span<const Outcome> labels, int k,
                       std::optional<std::size_t> exclude = std::nullopt) {
  std::vector<std::size_t> order;
  for (std::size_t d = 0; d < scores.size(); ++d) {
    if (exclude && *exclude == d) continue;
    order.push_back(d);
  }
  if (order.empty()) throw Error(ErrorCode::kEmptyCorpus, "nearest-neighbour search over an empty corpus");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const std::size_t take = std::min(order.size(), static_cast<std::size_t>(k));
  std::size_t passed = 0;
  for (std::size_t r = 0; r < take; ++r) {
    if (labels[order[r]] == Outcome::kPassed) ++passed;
  }
  return static_cast<double>(passed) / static_cast<double>(take);
}

inline std::vector<double> bm25_scores(const Bm25Index& index, const std::vector<std::string>& query) {
  std::vector<double> scores(index.size());
  for (std::size_t d = 0; d < index.size(); ++d) scores[d] = index.score(query, d);
  return scores;
}

inline std::vector<double> embedding_scores(const EmbeddingCorpus& corpus, const EmbeddingVector& query) {
  std::vector<double> scores(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) scores[d] = cosine(query, corpus.vectors[d]);
  return scores;
}

inline std::vector<Outcome> labels_of(const Bm25Index& index) {
  std::vector<Outcome> labels;
  for (std::size_t d = 0; d < index.size(); ++d) labels.push_back(index.document(d).label);
  return labels;
}

inline double knn_confidence(std::string_view requirement, const Bm25Index& index, int k) {
  if (index.size() == 0) throw Error(ErrorCode::kEmptyCorpus, "BM25 index is empty");
  const auto scores = bm25_scores(index, requirement_terms(requirement));
  const auto labels = labels_of(index);
  return knn_vote(scores, labels, k);
}

inline double knn_confidence(const EmbeddingVector& query, const EmbeddingCorpus& corpus, int k) {
  if (corpus.size() == 0) throw Error(ErrorCode::kEmptyCorpus, "embedding corpus is empty");
  return knn_vote(embedding_scores(corpus, query), corpus.labels, k);
}

struct KnnTuning {
  int k = 1;
  double train_auroc = 0.0;
};

/// Picks k from the candidates by leave-one-out AUROC on the training corpus
/// (each training query votes among the other training documents). Ties go
/// to the smaller k. `pairwise[q]` holds query q's scores against every
/// corpus document.
inline KnnTuning tune_knn_k(const std::vector<std::vector<double>>& pairwise, std::span<const Outcome> labels,
                            std::span<const int> candidates = kKnnCandidateKs) {
  if (labels.size() < 2) throw Error(ErrorCode::kEmptyCorpus, "k tuning needs at least two documents");
  KnnTuning best{candidates.front(), -1.0};
  for (int k : candidates) {
    std::vector<ScoredSample> scored;
    for (std::size_t q = 0; q < labels.size(); ++q) {
      scored.push_back({std::to_string(q), knn_vote(pairwise[q], labels, k, q), labels[q], {}, {}});
    }
    const double a = auroc(scored);
    if (a > best.train_auroc) best = {k, a};
  }
  return best;
}

}  // namespace honest
