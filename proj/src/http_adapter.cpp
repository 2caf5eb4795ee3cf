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

#include "gamrag/http_adapter.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "gamrag/doubles.hpp"
#include "gamrag/text.hpp"
#include "httplib.h"

namespace gamrag::http {
namespace {

using nlohmann::json;

constexpr std::string_view kSegmentPrompt =
    "Split the passage into sentences. Copy every sentence verbatim and keep the original order. "
    "Reply with JSON only: {\"sentences\": [\"...\", ...]}.";
constexpr std::string_view kNerPrompt =
    "List the named entities mentioned in the sentence, copied exactly as written. "
    "Reply with JSON only: {\"entities\": [\"...\", ...]}.";
constexpr std::string_view kTimePrompt =
    "Find the time expression (a date, year, or period) that constrains the text and return it "
    "as a short phrase. If the text has no temporal constraint, return NONE. "
    "Reply with JSON only: {\"time\": \"<phrase or NONE>\"}.";
constexpr std::string_view kSufficiencyPrompt =
    "You are given a question and a list of sentences, each with an id. Decide whether these "
    "sentences together provide enough information to answer the question. "
    "Reply with JSON only: {\"sufficient\": \"yes\"} or {\"sufficient\": \"no\"}.";
constexpr std::string_view kSupportPrompt =
    "You are given a question, a proposed answer, and a list of sentences with ids. Select the "
    "sentences that help establish the answer, including intermediate facts that link the "
    "entities of a multi-step question. Use only ids from the list. "
    "Reply with JSON only: {\"support sids\": [<id>, ...]} (an empty list when none apply).";
constexpr std::string_view kRewritePrompt =
    "Write a new question that asks for exactly the same information with different wording or "
    "word order. Keep every named entity unchanged. Reply with JSON only: {\"question\": \"...\"}.";
constexpr std::string_view kGeneratePrompt =
    "Answer the question using only the passages provided. Keep the answer short. "
    "Reply with JSON only: {\"answer\": \"...\"}.";
constexpr std::string_view kAnswerJudgePrompt =
    "Decide whether the prediction answers the question in agreement with at least one of the "
    "reference answers. Reply with JSON only: {\"correct\": \"yes\"} or {\"correct\": \"no\"}.";

[[noreturn]] void fail(std::string_view fn, std::string_view msg) {
  throw Error(Errc::kAdapterFailure, std::string(fn) + ": " + std::string(msg));
}

std::uint64_t estimate_tokens(std::size_t chars) { return (chars + 3) / 4; }

const json& field(const json& result, std::string_view fn, const char* key) {
  if (!result.is_object() || !result.contains(key)) {
    fail(fn, std::string("reply lacks \"") + key + "\"");
  }
  return result.at(key);
}

std::string string_field(const json& result, std::string_view fn, const char* key) {
  const json& v = field(result, fn, key);
  if (!v.is_string()) fail(fn, std::string("\"") + key + "\" is not a string");
  return v.get<std::string>();
}

bool yes_no(const json& result, std::string_view fn, const char* key) {
  const std::string v = string_field(result, fn, key);
  if (v == "yes") return true;
  if (v == "no") return false;
  fail(fn, std::string("\"") + key + "\" must be \"yes\" or \"no\", got \"" + v + "\"");
}

json sentence_list(std::span<const JudgedSentence> sentences) {
  json arr = json::array();
  for (const auto& s : sentences) arr.push_back({{"sid", s.id}, {"text", s.text}});
  return arr;
}

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  try {
    std::size_t used = 0;
    const int n = std::stoi(v, &used);
    if (used != std::string_view(v).size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw Error(Errc::kInvalidArgument, std::string(name) + " is not an integer");
  }
}

}  // namespace

ClientConfig ClientConfig::from_env() {
  ClientConfig c;
  if (const char* url = std::getenv("GAM_ADAPTER_URL")) c.base_url = url;
  if (const char* key = std::getenv("GAM_ADAPTER_KEY")) c.api_key = key;
  c.timeout_ms = env_int("GAM_ADAPTER_TIMEOUT_MS", c.timeout_ms);
  return c;
}

void ClientConfig::validate() const {
  if (base_url.rfind("http://", 0) != 0) {
    throw Error(Errc::kInvalidArgument, "adapter URL must start with http:// (got \"" + base_url + "\")");
  }
  if (timeout_ms <= 0 || max_retries < 0 || backoff_ms < 0 || max_in_flight < 1) {
    throw Error(Errc::kInvalidArgument, "invalid HTTP client limits");
  }
}

Client::Client(ClientConfig config) : config_(std::move(config)) {
  config_.validate();
  const std::size_t host_start = std::string_view("http://").size();
  const std::size_t slash = config_.base_url.find('/', host_start);
  if (slash == std::string::npos) {
    scheme_host_port_ = config_.base_url;
  } else {
    scheme_host_port_ = config_.base_url.substr(0, slash);
    prefix_ = config_.base_url.substr(slash);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
  if (scheme_host_port_.size() <= host_start) {
    throw Error(Errc::kInvalidArgument, "adapter URL has no host");
  }
}

CallResult Client::call(std::string_view fn, json payload) const {
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    const Client* c;
    ~Release() {
      {
        std::lock_guard lock(c->mu_);
        --c->in_flight_;
      }
      c->cv_.notify_one();
    }
  } release{this};

  const std::string body = json{{"fn", fn}, {"payload", std::move(payload)}}.dump();
  const std::string path = prefix_ + "/" + std::string(fn);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  std::string last_error;
  int backoff = config_.backoff_ms;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    httplib::Client cli(scheme_host_port_);
    const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);
    auto res = cli.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) fail(fn, "HTTP status " + std::to_string(res->status));

    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception&) {
      fail(fn, "reply is not JSON");
    }
    if (!reply.is_object() || !reply.contains("ok") || !reply.at("ok").is_boolean()) {
      fail(fn, "reply lacks a boolean \"ok\"");
    }
    if (!reply.at("ok").get<bool>()) {
      std::string why = "backend reported failure";
      if (reply.contains("error") && reply.at("error").is_string()) {
        why += ": " + reply.at("error").get<std::string>();
      }
      fail(fn, why);
    }
    if (!reply.contains("result")) fail(fn, "reply lacks \"result\"");

    CallResult out;
    out.result = std::move(reply.at("result"));
    const auto tokens = reply.find("tokens");
    if (tokens != reply.end() && tokens->is_object() && tokens->contains("in") &&
        tokens->contains("out") && tokens->at("in").is_number_unsigned() &&
        tokens->at("out").is_number_unsigned()) {
      out.tokens = {tokens->at("in").get<std::uint64_t>(), tokens->at("out").get<std::uint64_t>()};
    } else {
      out.tokens = {estimate_tokens(body.size()), estimate_tokens(res->body.size())};
    }
    return out;
  }
  fail(fn, last_error + " after " + std::to_string(config_.max_retries + 1) + " attempts");
}

namespace {

CallResult metered(const Client& client, TokenMeter& meter, std::string_view fn, json payload) {
  CallResult r = client.call(fn, std::move(payload));
  meter.add(r.tokens.in, r.tokens.out);
  return r;
}

}  // namespace

HttpEmbedder::HttpEmbedder(std::shared_ptr<const Client> client, std::size_t dim)
    : client_(std::move(client)), dim_(dim) {
  if (dim_ == 0) throw Error(Errc::kInvalidArgument, "embedding dimension must be positive");
}

Vector HttpEmbedder::embed(std::string_view text) const {
  if (text.empty()) fail("embed", "empty text");
  const auto r = metered(*client_, meter_, "embed", {{"text", text}});
  const json& v = field(r.result, "embed", "embedding");
  if (!v.is_array() || v.size() != dim_) {
    fail("embed", "embedding must be an array of " + std::to_string(dim_) + " numbers");
  }
  Vector out;
  out.reserve(dim_);
  for (const auto& x : v) {
    if (!x.is_number()) fail("embed", "embedding holds a non-number");
    const double d = x.get<double>();
    if (!std::isfinite(d)) fail("embed", "embedding holds a non-finite value");
    out.push_back(d);
  }
  if (norm(out) == 0.0) fail("embed", "zero embedding");
  return normalized(out);
}

std::vector<SentenceSpan> HttpSegmenter::segment(std::string_view text) const {
  const auto r = metered(*client_, meter_, "segment", {{"passage", text}, {"prompt", kSegmentPrompt}});
  const json& arr = field(r.result, "segment", "sentences");
  if (!arr.is_array()) fail("segment", "\"sentences\" is not an array");
  std::vector<SentenceSpan> out;
  std::size_t cursor = 0;
  for (const auto& s : arr) {
    if (!s.is_string()) fail("segment", "sentence is not a string");
    const std::string sentence = s.get<std::string>();
    if (sentence.empty()) continue;
    const std::size_t at = text.find(sentence, cursor);
    if (at == std::string_view::npos) fail("segment", "sentence not found verbatim in passage");
    out.push_back({sentence, at, at + sentence.size()});
    cursor = at + sentence.size();
  }
  return out;
}

std::vector<std::string> HttpNer::surfaces(std::string_view sentence) const {
  const auto r = metered(*client_, meter_, "ner", {{"sentence", sentence}, {"prompt", kNerPrompt}});
  const json& arr = field(r.result, "ner", "entities");
  if (!arr.is_array()) fail("ner", "\"entities\" is not an array");
  std::vector<std::string> out;
  for (const auto& e : arr) {
    if (!e.is_string()) fail("ner", "entity is not a string");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::optional<std::string> HttpTimeExtractor::extract(std::string_view text) const {
  const auto r = metered(*client_, meter_, "time", {{"text", text}, {"prompt", kTimePrompt}});
  const std::string t = text::collapse_whitespace(string_field(r.result, "time", "time"));
  if (t.empty() || t == "NONE") return std::nullopt;
  return t;
}

bool HttpSufficiencyJudge::sufficient(std::string_view question,
                                      std::span<const JudgedSentence> sentences) const {
  const auto r = metered(*client_, meter_, "sufficiency",
                         {{"question", question},
                          {"sentences", sentence_list(sentences)},
                          {"prompt", kSufficiencyPrompt}});
  return yes_no(r.result, "sufficiency", "sufficient");
}

std::vector<SentenceId> HttpSupportJudge::support(std::string_view question,
                                                  std::string_view predicted_answer,
                                                  std::span<const JudgedSentence> sentences) const {
  const auto r = metered(*client_, meter_, "support",
                         {{"question", question},
                          {"answer", predicted_answer},
                          {"sentences", sentence_list(sentences)},
                          {"prompt", kSupportPrompt}});
  const json& arr = field(r.result, "support", "support sids");
  if (!arr.is_array()) fail("support", "\"support sids\" is not an array");
  std::vector<SentenceId> out;
  for (const auto& id : arr) {
    if (!id.is_number_unsigned()) fail("support", "sentence id is not a non-negative integer");
    const auto v = id.get<std::uint64_t>();
    const bool presented = std::any_of(sentences.begin(), sentences.end(),
                                       [&](const JudgedSentence& s) { return s.id == v; });
    if (!presented) fail("support", "sentence id " + std::to_string(v) + " was not presented");
    out.push_back(static_cast<SentenceId>(v));
  }
  return out;
}

std::string HttpRewriter::rewrite(std::string_view question) const {
  const auto r = metered(*client_, meter_, "rewrite", {{"question", question}, {"prompt", kRewritePrompt}});
  std::string q = string_field(r.result, "rewrite", "question");
  if (text::collapse_whitespace(q).empty()) fail("rewrite", "empty rewrite");
  return q;
}

std::string HttpGenerator::generate(std::string_view question,
                                    std::span<const std::string> passages) const {
  const auto r = metered(*client_, meter_, "generate",
                         {{"question", question},
                          {"passages", std::vector<std::string>(passages.begin(), passages.end())},
                          {"prompt", kGeneratePrompt}});
  return string_field(r.result, "generate", "answer");
}

bool HttpAnswerJudge::correct(std::string_view question, std::string_view prediction,
                              std::span<const std::string> gold_answers) const {
  const auto r = metered(*client_, meter_, "answer_judge",
                         {{"question", question},
                          {"prediction", prediction},
                          {"references", std::vector<std::string>(gold_answers.begin(), gold_answers.end())},
                          {"prompt", kAnswerJudgePrompt}});
  return yes_no(r.result, "answer_judge", "correct");
}

const std::set<std::string, std::less<>>& function_names() {
  static const std::set<std::string, std::less<>> names = {
      "embed", "segment", "ner", "time", "sufficiency", "support", "rewrite", "generate", "answer_judge"};
  return names;
}

void install(AdapterRegistry& registry, std::shared_ptr<const Client> client,
             const std::set<std::string, std::less<>>& functions, std::size_t dim) {
  for (const auto& f : functions) {
    if (!function_names().contains(f)) {
      throw Error(Errc::kInvalidArgument, "unknown adapter function \"" + f + "\"");
    }
  }
  auto has = [&](std::string_view f) { return functions.contains(f); };
  if (has("embed")) {
    registry.embedder =
        std::make_shared<doubles::CachingEmbedder>(std::make_shared<HttpEmbedder>(client, dim));
  }
  if (has("segment")) registry.segmenter = std::make_shared<HttpSegmenter>(client);
  if (has("ner")) registry.ner = std::make_shared<HttpNer>(client);
  if (has("time")) registry.time_extractor = std::make_shared<HttpTimeExtractor>(client);
  if (has("sufficiency")) registry.sufficiency_judge = std::make_shared<HttpSufficiencyJudge>(client);
  if (has("support")) registry.support_judge = std::make_shared<HttpSupportJudge>(client);
  if (has("rewrite")) registry.rewriter = std::make_shared<HttpRewriter>(client);
  if (has("generate")) registry.generator = std::make_shared<HttpGenerator>(client);
  if (has("answer_judge")) registry.answer_judge = std::make_shared<HttpAnswerJudge>(client);
}

}  // namespace gamrag::http
