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

// Boundary contracts for every model-backed function the engine calls.
// Implementations must be safe for concurrent calls; the offline doubles in
// doubles.hpp are pure functions of their inputs and a seed.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gamrag/linalg.hpp"

namespace gamrag {

using EntityId = std::uint32_t;
using SentenceId = std::uint32_t;
using PassageIndex = std::uint32_t;

// Literal embedded in place of a missing temporal constraint.
inline constexpr std::string_view kNoTimeSentinel = "[NO_TIME]";

struct TokenUsage {
  std::uint64_t in = 0;
  std::uint64_t out = 0;

  std::uint64_t total() const { return in + out; }
  TokenUsage& operator+=(const TokenUsage& o) {
    in += o.in;
    out += o.out;
    return *this;
  }
  friend TokenUsage operator-(TokenUsage a, const TokenUsage& b) {
    a.in -= b.in;
    a.out -= b.out;
    return a;
  }
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

// Thread-safe token tally shared by adapters that talk to a backend.
class TokenMeter {
 public:
  void add(std::uint64_t in, std::uint64_t out) {
    in_.fetch_add(in, std::memory_order_relaxed);
    out_.fetch_add(out, std::memory_order_relaxed);
  }
  TokenUsage read() const { return {in_.load(), out_.load()}; }

 private:
  std::atomic<std::uint64_t> in_{0};
  std::atomic<std::uint64_t> out_{0};
};

class Adapter {
 public:
  virtual ~Adapter() = default;
  // Stable identifier recorded into build metadata and episode traces.
  virtual std::string name() const = 0;
  virtual TokenUsage usage() const { return {}; }
};

class Embedder : public Adapter {
 public:
  virtual std::size_t dim() const = 0;
  // Unit-norm embedding of a non-empty text.
  virtual Vector embed(std::string_view text) const = 0;
};

struct SentenceSpan {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

class Segmenter : public Adapter {
 public:
  virtual std::vector<SentenceSpan> segment(std::string_view text) const = 0;
};

class NerAdapter : public Adapter {
 public:
  // Raw entity surfaces as they appear in the sentence.
  virtual std::vector<std::string> surfaces(std::string_view sentence) const = 0;
};

class TimeExtractor : public Adapter {
 public:
  // std::nullopt means no temporal constraint.
  virtual std::optional<std::string> extract(std::string_view text) const = 0;
};

struct JudgedSentence {
  SentenceId id = 0;
  std::string text;
};

class SufficiencyJudge : public Adapter {
 public:
  virtual bool sufficient(std::string_view question,
                          std::span<const JudgedSentence> sentences) const = 0;
};

class SupportJudge : public Adapter {
 public:
  virtual std::vector<SentenceId> support(std::string_view question,
                                          std::string_view predicted_answer,
                                          std::span<const JudgedSentence> sentences) const = 0;
};

class Rewriter : public Adapter {
 public:
  virtual std::string rewrite(std::string_view question) const = 0;
};

class Generator : public Adapter {
 public:
  virtual std::string generate(std::string_view question,
                               std::span<const std::string> passages) const = 0;
};

// Optional LLM-as-judge answer grading; only used to report judge accuracy.
class AnswerJudge : public Adapter {
 public:
  virtual bool correct(std::string_view question, std::string_view prediction,
                       std::span<const std::string> gold_answers) const = 0;
};

struct AdapterRegistry {
  std::shared_ptr<const Embedder> embedder;
  std::shared_ptr<const Segmenter> segmenter;
  std::shared_ptr<const NerAdapter> ner;
  std::shared_ptr<const TimeExtractor> time_extractor;
  std::shared_ptr<const SufficiencyJudge> sufficiency_judge;
  std::shared_ptr<const SupportJudge> support_judge;
  std::shared_ptr<const Rewriter> rewriter;
  std::shared_ptr<const Generator> generator;        // optional
  std::shared_ptr<const AnswerJudge> answer_judge;   // optional

  // Sum of token usage over every distinct adapter instance.
  TokenUsage total_usage() const;
};

// Segment a passage; the default segmenter never fails on non-empty text.
std::vector<SentenceSpan> segment_passage(std::string_view text, const Segmenter& segmenter);

// Canonicalized, de-duplicated entity surfaces in first-occurrence order.
std::vector<std::string> extract_entities(std::string_view sentence, const NerAdapter& ner);

// Contract-checked judge calls. Both raise kAdapterFailure on violations:
// sufficiency requires a non-empty sentence list, support ids must be a
// subset of the presented ids.
bool judge_sufficiency(const SufficiencyJudge& judge, std::string_view question,
                       std::span<const JudgedSentence> sentences);
std::vector<SentenceId> judge_support(const SupportJudge& judge, std::string_view question,
                                      std::string_view predicted_answer,
                                      std::span<const JudgedSentence> sentences);

std::string rewrite_similar(const Rewriter& rewriter, std::string_view question);

// Runs fn, mapping any non-library exception to kAdapterFailure.
template <typename Fn>
auto call_adapter(std::string_view what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Errc::kAdapterFailure, std::string(what) + ": " + e.what());
  }
}

}  // namespace gamrag
