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

#include "gamrag/doubles.hpp"

#include <algorithm>
#include <array>
#include <regex>

#include "gamrag/hash.hpp"
#include "gamrag/text.hpp"

namespace gamrag::doubles {
namespace {

constexpr std::array<std::string_view, 36> kFunctionWords = {
    "a",    "an",   "the",  "of",   "is",   "was",  "were", "are",  "be",
    "been", "in",   "on",   "at",   "to",   "and",  "or",   "by",   "for",
    "with", "as",   "from", "it",   "its",  "this", "that", "who",  "whom",
    "what", "which", "when", "where", "did", "does", "do",  "also", "how"};

bool is_function_word(std::string_view w) {
  return std::find(kFunctionWords.begin(), kFunctionWords.end(), w) != kFunctionWords.end();
}

constexpr std::array<std::string_view, 40> kInitialStopwords = {
    "the",   "a",     "an",    "in",    "on",     "at",    "it",   "he",   "she",  "they",
    "this",  "that",  "these", "those", "who",    "what",  "when", "where", "which", "why",
    "how",   "is",    "was",   "are",   "were",   "did",   "does", "do",   "his",  "her",
    "their", "there", "after", "before", "during", "as",   "for",  "from", "by",   "we"};

bool is_initial_stopword(std::string_view token) {
  const std::string w = text::lower(token);
  return std::find(kInitialStopwords.begin(), kInitialStopwords.end(), w) !=
         kInitialStopwords.end();
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw Error(Errc::kInvalidArgument, "embedding dimension must be positive");
}

std::string HashEmbedder::name() const {
  return "hash-embedder/1(d=" + std::to_string(dim_) + ",seed=" + std::to_string(seed_) + ")";
}

void HashEmbedder::accumulate(std::string_view feature, double weight, Vector& acc) const {
  SplitMix rng(splitmix64(fnv1a(feature) ^ splitmix64(seed_)));
  for (double& x : acc) x += weight * rng.uniform(-1.0, 1.0);
}

Vector HashEmbedder::embed(std::string_view text) const {
  if (text.empty()) throw Error(Errc::kAdapterFailure, "embed called with empty text");
  Vector acc(dim_, 0.0);
  const auto toks = text::words(text);
  for (const auto& w : toks) accumulate(w, is_function_word(w) ? 0.2 : 1.0, acc);
  if (toks.empty() || norm(acc) == 0.0) {
    // Punctuation-only text falls back to a whole-string feature.
    std::fill(acc.begin(), acc.end(), 0.0);
    accumulate(std::string("\x01") + std::string(text), 1.0, acc);
  }
  return normalized(acc);
}

Vector CachingEmbedder::embed(std::string_view text) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(std::string(text)); it != cache_.end()) return it->second;
  }
  Vector v = inner_->embed(text);
  std::lock_guard lock(mu_);
  cache_.emplace(std::string(text), v);
  return v;
}

std::vector<SentenceSpan> RuleSegmenter::segment(std::string_view text) const {
  std::vector<SentenceSpan> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && text::is_space(text[i])) ++i;
    if (i >= n) break;
    const std::size_t begin = i;
    std::size_t end = n;
    for (; i < n; ++i) {
      if (is_terminator(text[i]) && (i + 1 == n || text::is_space(text[i + 1]))) {
        end = i + 1;
        ++i;
        break;
      }
    }
    if (end == n) {
      // No terminator: the sentence runs to the last non-space character.
      while (end > begin && text::is_space(text[end - 1])) --end;
      i = n;
    }
    out.push_back({std::string(text.substr(begin, end - begin)), begin, end});
  }
  return out;
}

std::vector<std::string> CapitalizedNer::surfaces(std::string_view sentence) const {
  std::vector<std::string> out;
  std::size_t run_begin = 0;
  std::size_t run_end = 0;
  bool in_run = false;
  bool prev_trailing_punct = false;
  auto close = [&] {
    if (in_run) out.emplace_back(sentence.substr(run_begin, run_end - run_begin));
    in_run = false;
  };

  bool first = true;
  for (std::string_view tok : text::split_ws(sentence)) {
    const std::string_view core = text::strip_edge_punct(tok);
    const bool leading_punct = !tok.empty() && text::is_punct(tok.front());
    const bool trailing_punct = !tok.empty() && text::is_punct(tok.back());
    bool capitalized = !core.empty() && core.front() >= 'A' && core.front() <= 'Z';
    if (first && capitalized && is_initial_stopword(core)) capitalized = false;
    first = false;

    const auto core_begin = static_cast<std::size_t>(core.data() - sentence.data());
    if (capitalized) {
      if (!in_run || prev_trailing_punct || leading_punct) {
        close();
        in_run = true;
        run_begin = core_begin;
      }
      run_end = core_begin + core.size();
    } else {
      close();
    }
    prev_trailing_punct = trailing_punct;
  }
  close();
  return out;
}

std::optional<std::string> RegexTimeExtractor::extract(std::string_view text) const {
  static const std::regex kDate(
      "\\b(?:(?:January|February|March|April|May|June|July|August|September|October|"
      "November|December)\\s+)?(?:1[0-9]{3}|20[0-9]{2})\\b");
  static const std::regex kConnector("^\\s*(?:and|to|until|through|-)\\s*$");
  static const std::regex kRangeLead("(?:between|from)\\s+$", std::regex::icase);

  const std::string s(text);
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kDate); it != std::sregex_iterator();
       ++it) {
    hits.emplace_back(static_cast<std::size_t>(it->position()),
                      static_cast<std::size_t>(it->position() + it->length()));
  }
  if (hits.empty()) return std::nullopt;

  auto [begin, end] = hits.front();
  if (hits.size() >= 2) {
    const std::string gap = s.substr(end, hits[1].first - end);
    if (std::regex_match(gap, kConnector)) {
      end = hits[1].second;
      std::smatch lead;
      const std::string before = s.substr(0, begin);
      if (std::regex_search(before, lead, kRangeLead)) begin = static_cast<std::size_t>(lead.position());
    }
  }
  return s.substr(begin, end - begin);
}

bool OracleSufficiencyJudge::sufficient(std::string_view question,
                                        std::span<const JudgedSentence> sentences) const {
  const auto it = gold_.find(question);
  if (it == gold_.end() || it->second.empty()) return false;
  return std::all_of(it->second.begin(), it->second.end(), [&](SentenceId g) {
    return std::any_of(sentences.begin(), sentences.end(),
                       [g](const JudgedSentence& s) { return s.id == g; });
  });
}

std::vector<SentenceId> OracleSupportJudge::support(std::string_view question, std::string_view,
                                                    std::span<const JudgedSentence> sentences) const {
  std::vector<SentenceId> out;
  const auto it = gold_.find(question);
  if (it == gold_.end()) return out;
  for (const auto& s : sentences) {
    if (std::find(it->second.begin(), it->second.end(), s.id) != it->second.end()) {
      out.push_back(s.id);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string PatternRewriter::rewrite(std::string_view question) const {
  struct Rule {
    std::regex pattern;
    const char* format;
  };
  static const std::array<Rule, 5> kRules = {{
      {std::regex("^Who is the (.+) of (.+)\\?$"), "Which person is the $1 of $2?"},
      {std::regex("^Who (\\w+ed) (.+)\\?$"), "$2 was $1 by whom?"},
      {std::regex("^When was (.+) born\\?$"), "What is the birth date of $1?"},
      {std::regex("^Where was (.+) born\\?$"), "What is the birthplace of $1?"},
      {std::regex("^What is the (.+) of (.+)\\?$"), "Of $2, what is the $1?"},
  }};
  const std::string q(question);
  for (const auto& rule : kRules) {
    if (std::regex_match(q, rule.pattern)) {
      return std::regex_replace(q, rule.pattern, rule.format);
    }
  }
  return q;
}

AdapterRegistry make_registry(std::uint64_t seed, std::size_t dim, const GoldTable* gold) {
  AdapterRegistry r;
  r.embedder = std::make_shared<CachingEmbedder>(std::make_shared<HashEmbedder>(dim, seed));
  r.segmenter = std::make_shared<RuleSegmenter>();
  r.ner = std::make_shared<CapitalizedNer>();
  r.time_extractor = std::make_shared<RegexTimeExtractor>();
  if (gold != nullptr) {
    r.sufficiency_judge = std::make_shared<OracleSufficiencyJudge>(*gold);
    r.support_judge = std::make_shared<OracleSupportJudge>(*gold);
  } else {
    r.sufficiency_judge = std::make_shared<FixedSufficiencyJudge>(true);
    r.support_judge = std::make_shared<OracleSupportJudge>(GoldTable{});
  }
  r.rewriter = std::make_shared<PatternRewriter>();
  return r;
}

}  // namespace gamrag::doubles
