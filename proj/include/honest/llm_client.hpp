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

// Client for OpenAI-compatible chat completions: temperature sampling of
// candidate programs (one request per program, n = 1) and yes/no probes read
// from first-token log-probabilities.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "honest/error.hpp"
#include "honest/http.hpp"
#include "honest/parallel.hpp"
#include "honest/program.hpp"
#include "honest/prompts.hpp"

namespace honest {

using json = nlohmann::json;

enum class SeedMode { kIndependent, kFixedSchedule };

/// Temperatures of the five-program default inference setting.
inline constexpr std::array<double, 5> kFiveTemperaturePreset{0.0, 0.2, 0.6, 0.8, 1.0};

inline constexpr int kDefaultSampleCount = 20;

struct SamplingConfig {
  std::string endpoint;
  std::string model;
  int n = kDefaultSampleCount;
  double temperature = 1.0;
  int max_tokens = 1024;
  int parallelism = 4;
  SeedMode seed_mode = SeedMode::kIndependent;
  int top_logprobs = 5;
  std::string api_key;  // empty: read HONEST_API_KEY
  http::RetryPolicy retry;
  std::chrono::seconds timeout{120};
  std::optional<std::string> audit_log;
  /// When set, request k carries "seed": seed + k.
  std::optional<std::int64_t> seed;

  /// Switches to the five-temperature schedule (n = 5).
  SamplingConfig& use_five_temperature_preset() {
    seed_mode = SeedMode::kFixedSchedule;
    n = static_cast<int>(kFiveTemperaturePreset.size());
    return *this;
  }

  /// Temperature of each request, in request order.
  std::vector<double> temperatures() const {
    if (seed_mode == SeedMode::kFixedSchedule) {
      return {kFiveTemperaturePreset.begin(), kFiveTemperaturePreset.end()};
    }
    return std::vector<double>(static_cast<std::size_t>(std::max(n, 0)), temperature);
  }

  void validate() const {
    if (endpoint.empty()) throw Error(ErrorCode::kInvalidArgument, "sampling endpoint is empty");
    if (model.empty()) throw Error(ErrorCode::kInvalidArgument, "sampling model is empty");
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
      throw Error(ErrorCode::kInvalidArgument, "temperature must lie in [0, 2]");
    }
    if (parallelism < 1) throw Error(ErrorCode::kInvalidArgument, "parallelism must be >= 1");
    if (max_tokens < 1) throw Error(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
    if (seed_mode == SeedMode::kFixedSchedule && n != 5) {
      throw Error(ErrorCode::kInvalidArgument, "the five-temperature schedule requires n = 5");
    }
  }
};

struct GenerationRecord {
  Program program;
  std::string raw_response;
  std::vector<double> token_probs;
  std::string finish_reason;
};

struct CodeBlock {
  std::string text;
  bool fenced = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// First ``` fenced block with its info string (language tag) dropped; the
/// whole trimmed response when there is no fence. An unterminated fence runs
/// to the end of the response.
inline CodeBlock find_code_block(std::string_view response) {
  const auto open = response.find("```");
  if (open == std::string_view::npos) return {std::string(detail::trim(response)), false};
  auto body_start = response.find('\n', open + 3);
  if (body_start == std::string_view::npos) {
    // "```code```" on one line: no info string to strip.
    body_start = open + 3;
    const auto close = response.find("```", body_start);
    const auto body = response.substr(body_start, close == std::string_view::npos ? std::string_view::npos
                                                                                  : close - body_start);
    return {std::string(detail::trim(body)), true};
  }
  ++body_start;
  const auto close = response.find("```", body_start);
  const auto body = close == std::string_view::npos ? response.substr(body_start)
                                                    : response.substr(body_start, close - body_start);
  return {std::string(detail::trim(body)), true};
}

inline std::string extract_code_block(std::string_view response) { return find_code_block(response).text; }

/// (token, logprob) alternatives for one generated position.
using TopLogprobs = std::vector<std::pair<std::string, double>>;

/// Probability of "Yes" from first-token alternatives. Tokens are matched
/// case-insensitively after trimming whitespace. When both yes and no mass are
/// present the yes mass is renormalized over the two; otherwise the raw yes
/// mass is returned (0 when absent).
inline double yes_probability(const TopLogprobs& alternatives) {
  double yes = 0.0;
  double no = 0.0;
  for (const auto& [token, logprob] : alternatives) {
    std::string t(detail::trim(token));
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "yes") yes += std::exp(logprob);
    if (t == "no") no += std::exp(logprob);
  }
  if (yes > 0.0 && no > 0.0) return yes / (yes + no);
  return std::clamp(yes, 0.0, 1.0);
}

class LlmClient {
 public:
  using Logger = std::function<void(const std::string&)>;

  explicit LlmClient(SamplingConfig config, Logger logger = default_logger())
      : config_(std::move(config)),
        endpoint_(http::Endpoint::parse(config_.endpoint)),
        limiter_(config_.parallelism),
        logger_(std::move(logger)) {
    config_.validate();
    options_.api_key = config_.api_key.empty() ? http::env_or_empty(http::kApiKeyEnv) : config_.api_key;
    options_.retry = config_.retry;
    options_.timeout = config_.timeout;
    options_.on_retry = [this](int attempt, const std::string& reason) {
      ++retries_;
      if (logger_) logger_("retry " + std::to_string(attempt) + ": " + reason);
    };
  }

  static Logger default_logger() {
    return [](const std::string& line) { std::cerr << "[honest] " << line << '\n'; };
  }

  const SamplingConfig& config() const { return config_; }
  int retries() const { return retries_.load(); }

  /// One completion at the given temperature.
  GenerationRecord generate(std::string_view requirement, Language language, double temperature,
                            int sample_index) {
    json body = base_request(temperature, config_.max_tokens);
    if (config_.seed) body["seed"] = *config_.seed + sample_index;
    body["messages"] = json::array({{{"role", "system"}, {"content", prompts::kSystem}},
                                    {{"role", "user"}, {"content", prompts::generation(requirement, language)}}});
    const json response = send(body);
    GenerationRecord record;
    try {
      const auto& choice = response.at("choices").at(0);
      const auto& content = choice.at("message").at("content");
      record.raw_response = content.is_string() ? content.get<std::string>() : std::string();
      record.finish_reason = choice.value("finish_reason", json()).is_string()
                                 ? choice["finish_reason"].get<std::string>()
                                 : std::string();
      if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
          choice["logprobs"].contains("content") && choice["logprobs"]["content"].is_array()) {
        for (const auto& token : choice["logprobs"]["content"]) {
          record.token_probs.push_back(probability(token.at("logprob").get<double>()));
        }
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kEndpointError, std::string("malformed chat completion: ") + e.what());
    }
    if (detail::trim(record.raw_response).empty()) {
      throw Error(ErrorCode::kEmptyCompletion, "completion " + std::to_string(sample_index) + " is empty");
    }
    const auto block = find_code_block(record.raw_response);
    record.program.source = block.text;
    record.program.language = language;
    ProgramOrigin origin;
    origin.sample_index = sample_index;
    origin.temperature = temperature;
    origin.unfenced = !block.fenced;
    if (!record.token_probs.empty()) origin.token_probs = record.token_probs;
    record.program.origin = std::move(origin);
    return record;
  }

  /// n requests, at most `parallelism` in flight. Records come back in request
  /// order regardless of completion order; empty completions are dropped.
  std::vector<GenerationRecord> sample_records(std::string_view requirement, Language language) {
    const auto temperatures = config_.temperatures();
    std::vector<std::optional<GenerationRecord>> slots(temperatures.size());
    std::atomic<int> empty{0};
    parallel_for(temperatures.size(), config_.parallelism, [&](std::size_t k) {
      try {
        slots[k] = generate(requirement, language, temperatures[k], static_cast<int>(k));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyCompletion) throw;
        ++empty;
        if (logger_) logger_(e.what());
      }
    });
    std::vector<GenerationRecord> records;
    for (auto& slot : slots) {
      if (slot) records.push_back(std::move(*slot));
    }
    if (records.empty() && empty > 0) {
      throw Error(ErrorCode::kEmptyCompletion, "every completion was empty");
    }
    if (temperatures.size() >= 2 && records.size() < 2) {
      throw Error(ErrorCode::kTooFewUsable, std::to_string(records.size()) + " usable program(s)");
    }
    return records;
  }

  SampleSet sample_programs(std::string requirement_id, std::string_view requirement, Language language) {
    SampleSet set{std::move(requirement_id), std::string(requirement), {}};
    for (auto& record : sample_records(requirement, language)) set.programs.push_back(std::move(record.program));
    return set;
  }

  /// P("Yes") for a yes/no question, read from the first generated token's
  /// top-k alternatives.
  double ask_yes_no(std::string_view prompt) {
    json body = base_request(0.0, 1);
    body["messages"] = json::array({{{"role", "user"}, {"content", std::string(prompt)}}});
    const json response = send(body);
    TopLogprobs alternatives;
    try {
      const auto& choice = response.at("choices").at(0);
      if (!choice.contains("logprobs") || !choice["logprobs"].is_object() ||
          !choice["logprobs"].contains("content") || !choice["logprobs"]["content"].is_array() ||
          choice["logprobs"]["content"].empty()) {
        throw Error(ErrorCode::kLogprobsUnavailable, "endpoint returned no log-probabilities");
      }
      const auto& first = choice["logprobs"]["content"][0];
      if (first.contains("top_logprobs") && first["top_logprobs"].is_array() && !first["top_logprobs"].empty()) {
        for (const auto& alt : first["top_logprobs"]) {
          alternatives.emplace_back(alt.at("token").get<std::string>(), alt.at("logprob").get<double>());
        }
      } else {
        alternatives.emplace_back(first.at("token").get<std::string>(), first.at("logprob").get<double>());
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kLogprobsUnavailable, std::string("malformed logprobs: ") + e.what());
    }
    return yes_probability(alternatives);
  }

 private:
  static double probability(double logprob) {
    const double p = std::exp(std::min(logprob, 0.0));
    return p > 0.0 ? p : std::numeric_limits<double>::min();
  }

  json base_request(double temperature, int max_tokens) const {
    return {{"model", config_.model},
            {"temperature", temperature},
            {"max_tokens", max_tokens},
            {"n", 1},
            {"logprobs", true},
            {"top_logprobs", config_.top_logprobs}};
  }

  json send(const json& body) {
    json response;
    {
      http::InFlightLimiter::Slot slot(limiter_);
      response = http::post_json(endpoint_, endpoint_.path("/chat/completions"), body, options_,
                                 ErrorCode::kEndpointError);
    }
    audit(body, response);
    return response;
  }

  void audit(const json& request, const json& response) {
    if (!config_.audit_log) return;
    std::lock_guard lock(audit_mutex_);
    std::ofstream out(*config_.audit_log, std::ios::app);
    out << json{{"request", request}, {"response", response}}.dump() << '\n';
  }

  SamplingConfig config_;
  http::Endpoint endpoint_;
  http::RequestOptions options_;
  http::InFlightLimiter limiter_;
  Logger logger_;
  std::atomic<int> retries_{0};
  std::mutex audit_mutex_;
};

}  // namespace honest
