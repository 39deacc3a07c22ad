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

// JSON-over-HTTP plumbing shared by the embeddings and chat-completions
// clients: endpoint parsing, bearer auth, bounded in-flight requests and
// retry with exponential backoff.

#pragma once

#include <httplib.h>

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "honest/error.hpp"

namespace honest::http {

using json = nlohmann::json;

inline constexpr const char* kApiKeyEnv = "HONEST_API_KEY";
inline constexpr const char* kEndpointEnv = "HONEST_ENDPOINT";

inline std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? std::string(value) : std::string();
}

/// "https://host:8443/v1" splits into origin "https://host:8443" and base
/// path "/v1".
struct Endpoint {
  std::string origin;
  std::string base_path;

  static Endpoint parse(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, "endpoint must include a scheme: " + std::string(url));
    }
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint endpoint;
    if (path_start == std::string_view::npos) {
      endpoint.origin = std::string(url);
    } else {
      endpoint.origin = std::string(url.substr(0, path_start));
      endpoint.base_path = std::string(url.substr(path_start));
    }
    while (!endpoint.base_path.empty() && endpoint.base_path.back() == '/') {
      endpoint.base_path.pop_back();
    }
    return endpoint;
  }

  std::string path(std::string_view suffix) const { return base_path + std::string(suffix); }
};

struct RetryPolicy {
  int max_retries = 2;
  std::chrono::milliseconds initial_backoff{500};
};

/// Counting gate that bounds concurrent requests.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int capacity) : available_(capacity < 1 ? 1 : capacity) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
  }
  void release() {
    {
      std::lock_guard lock(mutex_);
      ++available_;
    }
    cv_.notify_one();
  }

  class Slot {
   public:
    explicit Slot(InFlightLimiter& limiter) : limiter_(limiter) { limiter_.acquire(); }
    ~Slot() { limiter_.release(); }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

   private:
    InFlightLimiter& limiter_;
  };

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int available_;
};

struct RequestOptions {
  std::string api_key;
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
  /// Called before each retry with the attempt number (1-based) and reason.
  std::function<void(int, const std::string&)> on_retry;
};

namespace detail {

inline bool is_transient_status(int status) { return status == 429 || status >= 500; }

}  // namespace detail

/// POSTs `body` to origin+path and returns the parsed JSON response.
/// Connection failures, timeouts, 429 and 5xx are retried per the policy;
/// other failures throw `failure_code` immediately.
inline json post_json(const Endpoint& endpoint, const std::string& path, const json& body,
                      const RequestOptions& options, ErrorCode failure_code) {
  const std::string payload = body.dump();
  std::string last_error;
  auto backoff = options.retry.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_write_timeout(options.timeout);
    httplib::Headers headers;
    if (!options.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + options.api_key);
    }
    auto result = client.Post(path, headers, payload, "application/json");
    bool transient = true;
    if (!result) {
      last_error = "transport error: " + httplib::to_string(result.error());
    } else if (result->status >= 200 && result->status < 300) {
      try {
        return json::parse(result->body);
      } catch (const json::parse_error& e) {
        throw Error(failure_code, "unparseable response body from " + path + ": " + e.what());
      }
    } else {
      last_error = "HTTP " + std::to_string(result->status) + " from " + path;
      transient = detail::is_transient_status(result->status);
    }
    if (!transient || attempt >= options.retry.max_retries) break;
    if (options.on_retry) options.on_retry(attempt + 1, last_error);
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
  throw Error(failure_code, last_error + " (" + endpoint.origin + ")");
}

}  // namespace honest::http
