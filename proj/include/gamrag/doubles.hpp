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

// Deterministic offline implementations of every adapter contract. They are
// pure functions of (inputs, seed) and are what the test suites and the CLI's
// default configuration run against.

#include <map>
#include <mutex>
#include <unordered_map>

#include "gamrag/adapters.hpp"

namespace gamrag::doubles {

// Token-hash bag of features projected onto `dim` pseudo-random directions.
// Case-insensitive; identical word multisets give cosine exactly 1 and shared
// words give high cosine. Function words are down-weighted.
class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dim = 64, std::uint64_t seed = 0);
  std::string name() const override;
  std::size_t dim() const override { return dim_; }
  Vector embed(std::string_view text) const override;

 private:
  void accumulate(std::string_view feature, double weight, Vector& acc) const;
  std::size_t dim_;
  std::uint64_t seed_;
};

// Per-process memoization in front of any embedder.
class CachingEmbedder final : public Embedder {
 public:
  explicit CachingEmbedder(std::shared_ptr<const Embedder> inner) : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }
  std::size_t dim() const override { return inner_->dim(); }
  TokenUsage usage() const override { return inner_->usage(); }
  Vector embed(std::string_view text) const override;

 private:
  std::shared_ptr<const Embedder> inner_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, Vector> cache_;
};

// Splits after '.', '!' or '?' when followed by whitespace or end of text.
class RuleSegmenter final : public Segmenter {
 public:
  std::string name() const override { return "rule-segmenter/1"; }
  std::vector<SentenceSpan> segment(std::string_view text) const override;
};

// Maximal runs of capitalized tokens. Punctuation attached to a token ends
// the run, and a sentence-initial function word ("The", "Who", ...) is not
// treated as part of a name.
class CapitalizedNer final : public NerAdapter {
 public:
  std::string name() const override { return "capitalized-ner/1"; }
  std::vector<std::string> surfaces(std::string_view sentence) const override;
};

// Four-digit years (1000-2099), optionally preceded by a month name. Two
// dates joined by a range connector are returned as one phrase, including a
// leading "between"/"from" when present.
class RegexTimeExtractor final : public TimeExtractor {
 public:
  std::string name() const override { return "regex-time/1"; }
  std::optional<std::string> extract(std::string_view text) const override;
};

class FixedSufficiencyJudge final : public SufficiencyJudge {
 public:
  explicit FixedSufficiencyJudge(bool verdict) : verdict_(verdict) {}
  std::string name() const override { return verdict_ ? "always-yes/1" : "always-no/1"; }
  bool sufficient(std::string_view, std::span<const JudgedSentence>) const override {
    return verdict_;
  }

 private:
  bool verdict_;
};

// Gold supporting sentence ids keyed by question text.
using GoldTable = std::map<std::string, std::vector<SentenceId>, std::less<>>;

// "yes" exactly when every gold sentence of the question is presented.
// Questions without a gold entry are never sufficient.
class OracleSufficiencyJudge final : public SufficiencyJudge {
 public:
  explicit OracleSufficiencyJudge(GoldTable gold) : gold_(std::move(gold)) {}
  std::string name() const override { return "oracle-sufficiency/1"; }
  bool sufficient(std::string_view question,
                  std::span<const JudgedSentence> sentences) const override;

 private:
  GoldTable gold_;
};

// Returns the presented sentences that belong to the question's gold set.
class OracleSupportJudge final : public SupportJudge {
 public:
  explicit OracleSupportJudge(GoldTable gold) : gold_(std::move(gold)) {}
  std::string name() const override { return "oracle-support/1"; }
  std::vector<SentenceId> support(std::string_view question, std::string_view predicted_answer,
                                  std::span<const JudgedSentence> sentences) const override;

 private:
  GoldTable gold_;
};

class IdentityRewriter final : public Rewriter {
 public:
  std::string name() const override { return "identity-rewriter/1"; }
  std::string rewrite(std::string_view question) const override { return std::string(question); }
};

// Pinned word-order transforms that keep entity surfaces verbatim, e.g.
// "Who directed X?" -> "X was directed by whom?". Falls back to identity.
class PatternRewriter final : public Rewriter {
 public:
  std::string name() const override { return "pattern-rewriter/1"; }
  std::string rewrite(std::string_view question) const override;
};

// The full offline registry. Judges are oracle-backed when a gold table is
// given, otherwise always-yes / empty-support.
AdapterRegistry make_registry(std::uint64_t seed = 0, std::size_t dim = 64,
                              const GoldTable* gold = nullptr);

}  // namespace gamrag::doubles
