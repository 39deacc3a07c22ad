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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "honest/confidence.hpp"
#include "honest/error.hpp"
#include "honest/program.hpp"

namespace honest {

inline constexpr const char* kDefaultRefusal = "Sorry, I cannot solve this requirement.";

enum class Verdict { kShow, kRefuse };

struct GateDecision {
  std::string requirement_id;
  Verdict verdict = Verdict::kRefuse;
  std::vector<Program> programs;  // non-empty iff kShow
  std::string message;            // non-empty iff kRefuse
  double confidence = 0.0;
  double threshold = 0.0;
};

struct GateOptions {
  std::string refusal_message = kDefaultRefusal;
  /// Show at most this many programs (in sample order); nullopt shows all.
  std::optional<std::size_t> top;
};

/// Show iff confidence > threshold. Equality refuses.
inline GateDecision decide(double confidence, const SampleSet& samples, double threshold,
                           const GateOptions& options = {}) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in [0, 1]");
  }
  GateDecision decision;
  decision.requirement_id = samples.requirement_id;
  decision.confidence = confidence;
  decision.threshold = threshold;
  if (confidence > threshold && !samples.programs.empty()) {
    decision.verdict = Verdict::kShow;
    const std::size_t count =
        options.top ? std::min(*options.top, samples.programs.size()) : samples.programs.size();
    decision.programs.assign(samples.programs.begin(),
                             samples.programs.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(count, 1)));
  } else {
    decision.verdict = Verdict::kRefuse;
    decision.message = options.refusal_message.empty() ? kDefaultRefusal : options.refusal_message;
  }
  return decision;
}

inline GateDecision decide(const ConfidenceReport& report, const SampleSet& samples, double threshold,
                           const GateOptions& options = {}) {
  if (report.requirement_id != samples.requirement_id) {
    throw Error(ErrorCode::kIdMismatch, "report '" + report.requirement_id + "' vs samples '" +
                                            samples.requirement_id + "'");
  }
  return decide(report.confidence, samples, threshold, options);
}

inline nlohmann::json to_json(const GateDecision& decision) {
  nlohmann::json out;
  out["requirement_id"] = decision.requirement_id;
  out["verdict"] = decision.verdict == Verdict::kShow ? "show" : "refuse";
  out["confidence"] = decision.confidence;
  out["threshold"] = decision.threshold;
  if (decision.verdict == Verdict::kShow) {
    out["programs"] = nlohmann::json::array();
    for (const auto& p : decision.programs) out["programs"].push_back(p.source);
    out["message"] = nullptr;
  } else {
    out["programs"] = nullptr;
    out["message"] = decision.message;
  }
  return out;
}

}  // namespace honest
