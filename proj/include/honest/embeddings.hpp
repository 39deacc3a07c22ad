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

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "honest/error.hpp"
#include "honest/http.hpp"
#include "honest/program.hpp"
#include "honest/tokenize.hpp"

namespace honest {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dimension() const noexcept { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

enum class ProviderKind { kRemote, kLocalHashed };

struct EmbeddingProviderConfig {
  ProviderKind kind = ProviderKind::kLocalHashed;
  std::optional<std::string> endpoint;
  std::optional<std::string> model_name;
  int dimension = 256;
  int max_in_flight = 4;
  http::RetryPolicy retry;
  /// Bearer token; empty means "read HONEST_API_KEY at provider creation".
  std::string api_key;

  void validate() const {
    if (kind == ProviderKind::kRemote) {
      if (!endpoint || endpoint->empty() || !model_name || model_name->empty()) {
        throw Error(ErrorCode::kInvalidArgument, "remote embeddings need an endpoint and a model name");
      }
    } else if (dimension < 64) {
      throw Error(ErrorCode::kInvalidArgument, "local hashed embeddings need dimension >= 64");
    }
  }

  static EmbeddingProviderConfig local(int dimension = 256) {
    EmbeddingProviderConfig config;
    config.dimension = dimension;
    return config;
  }
};

/// Maps programs (and free text) to vectors. Implementations are safe to call
/// concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbeddingVector embed(const Program& program) = 0;
  virtual EmbeddingVector embed_text(std::string_view text) = 0;
};

inline double l2_norm(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

/// dot(a, b) / (|a| |b|), clamped to [0, 1].
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, std::to_string(a.dimension()) + " vs " +
                                                   std::to_string(b.dimension()));
  }
  const double norm_a = l2_norm(a.values);
  const double norm_b = l2_norm(b.values);
  if (norm_a == 0.0 || norm_b == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
  return std::clamp(dot / (norm_a * norm_b), 0.0, 1.0);
}

/// Feature-hashed unigram + bigram counts, L2-normalized. Deterministic across
/// platforms: FNV-1a 64 with a fixed seed mixed into the offset basis.
class LocalHashedProvider final : public EmbeddingProvider {
 public:
  static constexpr std::uint64_t kHashSeed = 0x5eed0f4a11c0de5ULL;

  explicit LocalHashedProvider(int dimension) : dimension_(dimension) {
    if (dimension < 64) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 64");
  }

  EmbeddingVector embed(const Program& program) override { return embed_tokens(tokenize(program)); }

  EmbeddingVector embed_text(std::string_view text) override { return embed_tokens(word_tokens(text)); }

  EmbeddingVector embed_tokens(const TokenSequence& sequence) const {
    std::vector<double> values(static_cast<std::size_t>(dimension_), 0.0);
    const auto& tokens = sequence.tokens;
    if (tokens.empty()) {
      // Empty input maps to a fixed sentinel direction instead of a zero vector.
      values[bucket("\x02<empty>")] = 1.0;
      return {std::move(values)};
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      values[bucket("\x01" + tokens[i])] += 1.0;
      if (i + 1 < tokens.size()) {
        values[bucket("\x03" + tokens[i] + "\x1f" + tokens[i + 1])] += 1.0;
      }
    }
    const double norm = l2_norm(values);
    for (double& v : values) v /= norm;
    return {std::move(values)};
  }

  /// Lower-cased alphanumeric runs plus single punctuation characters.
  static TokenSequence word_tokens(std::string_view text) {
    TokenSequence out;
    std::string current;
    for (unsigned char c : text) {
      if (std::isalnum(c) || c == '_') {
        current += static_cast<char>(std::tolower(c));
        continue;
      }
      if (!current.empty()) out.tokens.push_back(std::exchange(current, {}));
      if (!std::isspace(c)) out.tokens.emplace_back(1, static_cast<char>(c));
    }
    if (!current.empty()) out.tokens.push_back(std::move(current));
    return out;
  }

 private:
  std::size_t bucket(std::string_view feature) const {
    std::uint64_t hash = 0xcbf29ce484222325ULL ^ kHashSeed;
    for (unsigned char c : feature) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(hash % static_cast<std::uint64_t>(dimension_));
  }

  int dimension_;
};

/// OpenAI-compatible `POST {endpoint}/embeddings`. Results are memoized per
/// input text for the lifetime of the provider.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(const EmbeddingProviderConfig& config)
      : endpoint_(http::Endpoint::parse(config.endpoint.value_or(""))),
        model_(config.model_name.value_or("")),
        limiter_(config.max_in_flight) {
    options_.api_key = config.api_key.empty() ? http::env_or_empty(http::kApiKeyEnv) : config.api_key;
    options_.retry = config.retry;
  }

  EmbeddingVector embed(const Program& program) override { return embed_text(program.source); }

  EmbeddingVector embed_text(std::string_view text) override {
    const std::string key(text);
    {
      std::lock_guard lock(cache_mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    http::json response;
    {
      http::InFlightLimiter::Slot slot(limiter_);
      response = http::post_json(endpoint_, endpoint_.path("/embeddings"),
                                 {{"model", model_}, {"input", http::json::array({key})}},
                                 options_, ErrorCode::kProviderUnavailable);
    }
    EmbeddingVector vector;
    try {
      vector.values = response.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const http::json::exception& e) {
      throw Error(ErrorCode::kProviderUnavailable, std::string("malformed embeddings response: ") + e.what());
    }
    if (vector.values.empty() || l2_norm(vector.values) == 0.0) {
      throw Error(ErrorCode::kDegenerateEmbedding, "endpoint returned an empty or all-zero embedding");
    }
    std::lock_guard lock(cache_mutex_);
    return cache_.emplace(key, std::move(vector)).first->second;
  }

 private:
  http::Endpoint endpoint_;
  std::string model_;
  http::RequestOptions options_;
  http::InFlightLimiter limiter_;
  std::mutex cache_mutex_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
};

inline std::shared_ptr<EmbeddingProvider> make_provider(const EmbeddingProviderConfig& config) {
  config.validate();
  if (config.kind == ProviderKind::kRemote) return std::make_shared<RemoteEmbeddingProvider>(config);
  return std::make_shared<LocalHashedProvider>(config.dimension);
}

}  // namespace honest
