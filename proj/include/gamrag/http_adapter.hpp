// Copyright 2026 The GamRag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Adapters backed by a remote model service.
//
// Every function is one POST to <base>/<fn> with body
//   {"fn": <fn>, "payload": {..., "prompt": <text>}}
// and a reply
//   {"ok": true, "result": {...}, "tokens": {"in": n, "out": n}}.
// Results are parsed strictly; anything off-schema is an adapter failure.

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "gamrag/adapters.hpp"
#include "json.hpp"

namespace gamrag::http {

struct ClientConfig {
  std::string base_url;   // http://host[:port][/prefix]
  std::string api_key;    // sent as a bearer token when non-empty
  int timeout_ms = 30000;
  int max_retries = 3;
  int backoff_ms = 250;   // doubled after every failed attempt
  int max_in_flight = 4;

  // GAM_ADAPTER_URL, GAM_ADAPTER_KEY, GAM_ADAPTER_TIMEOUT_MS.
  static ClientConfig from_env();
  void validate() const;
};

struct CallResult {
  nlohmann::json result;
  TokenUsage tokens;
};

class Client {
 public:
  explicit Client(ClientConfig config);

  // Retries transport errors and 5xx/429 replies; ok=false and malformed
  // replies fail immediately. Thread-safe.
  CallResult call(std::string_view fn, nlohmann::json payload) const;

  const ClientConfig& config() const { return config_; }

 private:
  ClientConfig config_;
  std::string scheme_host_port_;
  std::string prefix_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  mutable int in_flight_ = 0;
};

class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(std::shared_ptr<const Client> client, std::size_t dim);
  std::string name() const override { return "http-embedder/1(d=" + std::to_string(dim_) + ")"; }
  TokenUsage usage() const override { return meter_.read(); }
  std::size_t dim() const override { return dim_; }
  Vector embed(std::string_view text) const override;

 private:
  std::shared_ptr<const Client> client_;
  std::size_t dim_;
  mutable TokenMeter meter_;
};

class HttpSegmenter final : public Segmenter {
 public:
  explicit HttpSegmenter(std::shared_ptr<const Client> client) : client_(std::move(client)) {}
  std::string name() const override { return "http-segmenter/1"; }
  TokenUsage usage() const override { return meter_.read(); }
  std::vector<SentenceSpan> segment(std::string_view text) const override;

 private:
  std::shared_ptr<const Client> client_;
  mutable TokenMeter meter_;
};

class HttpNer final : public NerAdapter {
 public:
  explicit HttpNer(std::shared_ptr<const Client> client) : client_(std::move(client)) {}
  std::string name() const override { return "http-ner/1"; }
  TokenUsage usage() const override { return meter_.read(); }
  std::vector<std::string> surfaces(std::string_view sentence) const override;

 private:
  std::shared_ptr<const Client> client_;
  mutable TokenMeter meter_;
};

class HttpTimeExtractor final : public TimeExtractor {
 public:
  explicit HttpTimeExtractor(std::shared_ptr<const Client> client) : client_(std::move(client)) {}
  std::string name() const override { return "http-time/1"; }
  TokenUsage usage() const override { return meter_.read(); }
  std::optional<std::string> extract(std::string_view text) const override;

 private:
  std::shared_ptr<const Client> client_;
  mutable TokenMeter meter_;
};

class HttpSufficiencyJudge final : public SufficiencyJudge {
 public:
  explicit HttpSufficiencyJudge(std::shared_ptr<const Client> client)
      : client_(std::move(client)) {}
  std::string name() const override { return "http-sufficiency/1"; }
  TokenUsage usage() const override { return meter_.read(); }
  bool sufficient(std::string_view question,
                  std::span<const JudgedSentence> sentences) const override;

 private:
  std::shared_ptr<const Client> client_;
  mutable TokenMeter meter_;
};

class HttpSupportJudge final : public SupportJudge {
 public:
  explicit HttpSupportJudge(std::shared_ptr<const Client> client) : client_(std::move(client)) {}
  std::string name() const override { return "http-support/1"; }
  TokenUsage usage() const override { return meter_.read(); }
  std::vector<SentenceId> support(std::string_view question, std::string_view predicted_answer,
                                  std::span<const JudgedSentence> sentences) const override;

 private:
  std::shared_ptr<const Client> client_;
  mutable TokenMeter meter_;
};

class HttpRewriter final : public Rewriter {
 public:
  explicit HttpRewriter(std::shared_ptr<const Client> client) : client_(std::move(client)) {}
  std::string name() const override { return "http-rewriter/1"; }
  TokenUsage usage() const override { return meter_.read(); }
  std::string rewrite(std::string_view question) const override;

 private:
  std::shared_ptr<const Client> client_;
  mutable TokenMeter meter_;
};

class HttpGenerator final : public Generator {
 public:
  explicit HttpGenerator(std::shared_ptr<const Client> client) : client_(std::move(client)) {}
  std::string name() const override { return "http-generator/1"; }
  TokenUsage usage() const override { return meter_.read(); }
  std::string generate(std::string_view question,
                       std::span<const std::string> passages) const override;

 private:
  std::shared_ptr<const Client> client_;
  mutable TokenMeter meter_;
};

class HttpAnswerJudge final : public AnswerJudge {
 public:
  explicit HttpAnswerJudge(std::shared_ptr<const Client> client) : client_(std::move(client)) {}
  std::string name() const override { return "http-answer-judge/1"; }
  TokenUsage usage() const override { return meter_.read(); }
  bool correct(std::string_view question, std::string_view prediction,
               std::span<const std::string> gold_answers) const override;

 private:
  std::shared_ptr<const Client> client_;
  mutable TokenMeter meter_;
};

// Function names accepted by install(): embed, segment, ner, time,
// sufficiency, support, rewrite, generate, answer_judge.
const std::set<std::string, std::less<>>& function_names();

// Replaces the listed functions of `registry` with HTTP-backed adapters.
// Unknown names raise kInvalidArgument.
void install(AdapterRegistry& registry, std::shared_ptr<const Client> client,
             const std::set<std::string, std::less<>>& functions, std::size_t dim);

}  // namespace gamrag::http
