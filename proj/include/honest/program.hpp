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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "honest/error.hpp"

namespace honest {

enum class Language { kPython, kJava };

/// Per-requirement (or per-program) verdict: did the model solve it.
enum class Outcome { kPassed, kFailed };

inline constexpr std::string_view to_string(Outcome outcome) {
  return outcome == Outcome::kPassed ? "passed" : "failed";
}

inline constexpr std::string_view to_string(Language language) {
  return language == Language::kPython ? "python" : "java";
}

/// Case-insensitive; accepts "python"/"py" and "java".
inline Language parse_language(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "python" || lower == "py") return Language::kPython;
  if (lower == "java") return Language::kJava;
  throw Error(ErrorCode::kUnknownLanguage, "unknown language '" + std::string(name) + "'");
}

/// Where a sampled program came from. token_probs, when present, is non-empty
/// with every element in (0, 1].
struct ProgramOrigin {
  int sample_index = 0;
  double temperature = 1.0;
  std::optional<std::vector<double>> token_probs;
  bool unfenced = false;

  bool operator==(const ProgramOrigin&) const = default;
};

struct Program {
  std::string source;
  Language language = Language::kPython;
  std::optional<ProgramOrigin> origin;

  bool operator==(const Program&) const = default;
};

/// Lexical tokens with comments and insignificant whitespace removed.
struct TokenSequence {
  std::vector<std::string> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  bool operator==(const TokenSequence&) const = default;
};

/// The N programs sampled for one requirement.
struct SampleSet {
  std::string requirement_id;
  std::string requirement;
  std::vector<Program> programs;

  std::size_t size() const noexcept { return programs.size(); }
};

inline void validate_origin(const ProgramOrigin& origin) {
  if (origin.sample_index < 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample_index must be >= 0");
  }
  if (!(origin.temperature >= 0.0 && origin.temperature <= 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must lie in [0, 2]");
  }
  if (origin.token_probs) {
    if (origin.token_probs->empty()) {
      throw Error(ErrorCode::kInvalidArgument, "token_probs must be non-empty when present");
    }
    for (double p : *origin.token_probs) {
      if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "token probability outside (0, 1]");
      }
    }
  }
}

/// Checks the preconditions confidence estimation relies on: N >= 2 and a
/// single shared language.
inline void validate_for_estimation(const SampleSet& samples) {
  if (samples.programs.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "requirement '" + samples.requirement_id + "' has " +
                    std::to_string(samples.programs.size()) + " program(s); need at least 2");
  }
  const Language language = samples.programs.front().language;
  for (const auto& program : samples.programs) {
    if (program.language != language) {
      throw Error(ErrorCode::kInvalidArgument,
                  "programs of '" + samples.requirement_id + "' mix languages");
    }
    if (program.origin) validate_origin(*program.origin);
  }
}

}  // namespace honest
