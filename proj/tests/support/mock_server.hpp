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

// In-process OpenAI-compatible endpoint for tests. Handlers receive the parsed
// request body and return (status, body). The server counts requests and
// records the peak number of concurrently executing handlers.

#pragma once

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace honest::testing {

using json = nlohmann::json;

struct MockReply {
  int status = 200;
  json body;
};

class MockServer {
 public:
  using Handler = std::function<MockReply(const json& request)>;

  MockServer() {
    server_.new_task_queue = [] { return new httplib::ThreadPool(16); };
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      serve(chat_, req, res);
    });
    server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      serve(embeddings_, req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

  void on_chat(Handler handler) { chat_ = std::move(handler); }
  void on_embeddings(Handler handler) { embeddings_ = std::move(handler); }
  void set_delay(std::chrono::milliseconds delay) { delay_ = delay; }

  int requests() const { return requests_.load(); }
  int peak_in_flight() const { return peak_.load(); }
  std::vector<json> bodies() const {
    std::lock_guard lock(mutex_);
    return bodies_;
  }

 private:
  void serve(const Handler& handler, const httplib::Request& req, httplib::Response& res) {
    const int now = ++in_flight_;
    int peak = peak_.load();
    while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
    }
    ++requests_;
    json body = json::parse(req.body, nullptr, false);
    {
      std::lock_guard lock(mutex_);
      bodies_.push_back(body);
    }
    if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
    MockReply reply = handler ? handler(body) : MockReply{404, {{"error", "no handler"}}};
    --in_flight_;
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  Handler chat_;
  Handler embeddings_;
  std::chrono::milliseconds delay_{0};
  std::atomic<int> requests_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
  mutable std::mutex mutex_;
  std::vector<json> bodies_;
};

/// Chat completion carrying `content`, per-token logprobs for each
/// whitespace-separated piece, and optional first-token alternatives.
inline json chat_reply(const std::string& content, double token_logprob = std::log(0.9),
                       std::vector<std::pair<std::string, double>> first_top = {}) {
  json tokens = json::array();
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find(' ', start);
    if (end == std::string::npos) end = content.size();
    json token = {{"token", content.substr(start, end - start)}, {"logprob", token_logprob}};
    if (tokens.empty() && !first_top.empty()) {
      json top = json::array();
      for (const auto& [t, p] : first_top) top.push_back({{"token", t}, {"logprob", std::log(p)}});
      token["top_logprobs"] = top;
    }
    tokens.push_back(token);
    start = end + 1;
  }
  return {{"id", "mock"},
          {"object", "chat.completion"},
          {"choices", json::array({{{"index", 0},
                                    {"message", {{"role", "assistant"}, {"content", content}}},
                                    {"logprobs", {{"content", tokens}}},
                                    {"finish_reason", "stop"}}})}};
}

/// First-token alternatives for a yes/no probe, probabilities given directly.
inline json yes_no_reply(std::vector<std::pair<std::string, double>> top) {
  return chat_reply(top.empty() ? "Yes" : top.front().first, std::log(0.5), std::move(top));
}

}  // namespace honest::testing
