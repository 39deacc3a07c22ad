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

#include <stdexcept>
#include <string>
#include <string_view>

namespace honest {

/// Every failure the library reports carries one of these codes. The CLI maps
/// them onto process exit codes (see exit_code_for).
enum class ErrorCode {
  kUnsupportedLanguage,
  kCatastrophicParseFailure,
  kProviderUnavailable,
  kDegenerateEmbedding,
  kDimensionMismatch,
  kZeroVector,
  kComponentOutOfRange,
  kInvalidWeights,
  kTooFewSamples,
  kDegenerateLabels,
  kIdMismatch,
  kEndpointError,
  kEmptyCompletion,
  kTooFewUsable,
  kLogprobsUnavailable,
  kMissingLogprobs,
  kEmptyInput,
  kEmptyCorpus,
  kUnknownDocument,
  kMalformedLine,
  kDuplicateId,
  kUnknownLanguage,
  kJoinError,
  kSingleClass,
  kNoPositives,
  kMissingProgramCounts,
  kInvalidArgument,
  kIoError,
  kUnimplemented,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedLanguage: return "UnsupportedLanguage";
    case ErrorCode::kCatastrophicParseFailure: return "CatastrophicParseFailure";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kDegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kComponentOutOfRange: return "ComponentOutOfRange";
    case ErrorCode::kInvalidWeights: return "InvalidWeights";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kEndpointError: return "EndpointError";
    case ErrorCode::kEmptyCompletion: return "EmptyCompletion";
    case ErrorCode::kTooFewUsable: return "TooFewUsable";
    case ErrorCode::kLogprobsUnavailable: return "LogprobsUnavailable";
    case ErrorCode::kMissingLogprobs: return "MissingLogprobs";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kUnknownDocument: return "UnknownDocument";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownLanguage: return "UnknownLanguage";
    case ErrorCode::kJoinError: return "JoinError";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kMissingProgramCounts: return "MissingProgramCounts";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnimplemented: return "Unimplemented";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Stable process exit codes: 0 success, 2 usage/precondition, 3 network,
/// 4 unsupported feature.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNetwork = 3;
inline constexpr int kExitUnsupported = 4;

inline constexpr int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kProviderUnavailable:
    case ErrorCode::kEndpointError:
    case ErrorCode::kEmptyCompletion:
      return kExitNetwork;
    case ErrorCode::kUnimplemented:
    case ErrorCode::kUnsupportedLanguage:
    case ErrorCode::kLogprobsUnavailable:
      return kExitUnsupported;
    default:
      return kExitUsage;
  }
}

}  // namespace honest
