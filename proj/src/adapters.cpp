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

#include "gamrag/adapters.hpp"

#include <algorithm>
#include <set>

#include "gamrag/text.hpp"

namespace gamrag {

TokenUsage AdapterRegistry::total_usage() const {
  // One HTTP client may back several functions; count each instance once.
  std::set<const Adapter*> seen;
  TokenUsage total;
  auto add = [&](const Adapter* a) {
    if (a != nullptr && seen.insert(a).second) total += a->usage();
  };
  add(embedder.get());
  add(segmenter.get());
  add(ner.get());
  add(time_extractor.get());
  add(sufficiency_judge.get());
  add(support_judge.get());
  add(rewriter.get());
  add(generator.get());
  add(answer_judge.get());
  return total;
}

std::vector<SentenceSpan> segment_passage(std::string_view text, const Segmenter& segmenter) {
  if (text.empty()) throw Error(Errc::kInvalidArgument, "cannot segment empty text");
  auto spans = call_adapter("segmenter", [&] { return segmenter.segment(text); });
  std::size_t prev_end = 0;
  for (const auto& s : spans) {
    if (s.begin < prev_end || s.end <= s.begin || s.end > text.size() ||
        text.substr(s.begin, s.end - s.begin) != s.text) {
      throw Error(Errc::kAdapterFailure, "segmenter returned inconsistent spans");
    }
    prev_end = s.end;
  }
  return spans;
}

std::vector<std::string> extract_entities(std::string_view sentence, const NerAdapter& ner) {
  auto raw = call_adapter("ner", [&] { return ner.surfaces(sentence); });
  std::vector<std::string> out;
  for (const auto& surface : raw) {
    std::string canon = text::canonical_entity(surface);
    if (canon.empty()) continue;
    if (std::find(out.begin(), out.end(), canon) == out.end()) out.push_back(std::move(canon));
  }
  return out;
}

bool judge_sufficiency(const SufficiencyJudge& judge, std::string_view question,
                       std::span<const JudgedSentence> sentences) {
  if (sentences.empty()) {
    throw Error(Errc::kAdapterFailure, "sufficiency judge called without sentences");
  }
  return call_adapter("sufficiency judge", [&] { return judge.sufficient(question, sentences); });
}

std::vector<SentenceId> judge_support(const SupportJudge& judge, std::string_view question,
                                      std::string_view predicted_answer,
                                      std::span<const JudgedSentence> sentences) {
  auto ids = call_adapter("support judge",
                          [&] { return judge.support(question, predicted_answer, sentences); });
  for (SentenceId id : ids) {
    const bool presented = std::any_of(sentences.begin(), sentences.end(),
                                       [id](const JudgedSentence& s) { return s.id == id; });
    if (!presented) {
      throw Error(Errc::kAdapterFailure,
                  "support judge returned unpresented sentence " + std::to_string(id));
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::string rewrite_similar(const Rewriter& rewriter, std::string_view question) {
  if (text::collapse_whitespace(question).empty()) {
    throw Error(Errc::kAdapterFailure, "cannot rewrite an empty question");
  }
  auto out = call_adapter("rewriter", [&] { return rewriter.rewrite(question); });
  if (out.empty()) throw Error(Errc::kAdapterFailure, "rewriter returned an empty question");
  return out;
}

}  // namespace gamrag
