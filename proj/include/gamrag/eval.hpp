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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gamrag/retrieval.hpp"

namespace gamrag::eval {

struct QaItem {
  std::string question;
  std::vector<std::string> answers;
  std::optional<std::string> question_type;
  std::vector<SentenceId> gold_support_ids;
};

// JSON-Lines {"question", "answers": [...], "question_type"?, "gold_support_ids"?}.
std::vector<QaItem> read_dataset_jsonl(std::string_view content);

// Gold support table for the oracle judges, keyed by question text.
std::map<std::string, std::vector<SentenceId>, std::less<>> gold_table(
    const std::vector<QaItem>& items);

// 1 iff some gold answer, case-folded and whitespace-normalized, is a
// substring of the equally normalized prediction.
int contain_acc(std::string_view prediction, std::span<const std::string> gold_answers);

// Bag-of-tokens F1 after case folding and punctuation removal. Both sides
// empty gives 1; exactly one side empty gives 0.
double token_f1(std::string_view prediction, std::string_view gold);
double best_token_f1(std::string_view prediction, std::span<const std::string> gold_answers);

struct TurnReport {
  int turn = 0;
  std::size_t items = 0;
  std::size_t failed_items = 0;
  double contain_acc = 0.0;
  double token_f1 = 0.0;
  std::optional<double> judge_acc;   // only with an answer-judge adapter
  double mean_iterations = 0.0;
  double mean_latency_ms = 0.0;      // excluded from default exports
  double mean_adapter_ms = 0.0;      // judge time, reported separately
  TokenUsage adapter_tokens;
  std::uint64_t memory_revision = 0; // store revision at the end of the turn
  std::vector<std::string> episode_ids;
};

struct RunOptions {
  int turns = 1;       // reports for turns first_turn .. first_turn + turns - 1
  int first_turn = 0;  // > 0 when resuming from a snapshot
  bool feedback = true;
  std::function<void(int turn, const MemoryStore& store)> on_turn_end;
  std::function<void(int turn, std::size_t item, const RetrievalEpisode& episode)> on_episode;
};

// Multi-turn memorization: every turn walks the dataset in order and, per
// item, runs retrieve -> prediction -> metrics -> support judging -> feedback.
// Memory persists across turns. Items whose adapters fail are counted as
// unanswered and the run continues.
std::vector<TurnReport> run_memorization(const std::vector<QaItem>& dataset, const HierGraph& graph,
                                         MemoryStore& store, const RetrievalConfig& config,
                                         const AdapterRegistry& adapters, const RunOptions& options);

// Robustness protocol: report k is a read-only pass over `evaluation` after k
// feedback passes over `exposure`.
std::vector<TurnReport> run_transfer(const std::vector<QaItem>& exposure,
                                     const std::vector<QaItem>& evaluation, const HierGraph& graph,
                                     MemoryStore& store, const RetrievalConfig& config,
                                     const AdapterRegistry& adapters, const RunOptions& options);

struct TypeSplit {
  std::vector<QaItem> exposure;
  std::vector<QaItem> evaluation;
};

struct Scenarios {
  std::vector<QaItem> same;
  std::vector<QaItem> similar;
  TypeSplit different;
};

std::vector<QaItem> make_similar(const std::vector<QaItem>& dataset, const Rewriter& rewriter);

// Per question type, a seeded shuffle followed by a half split (the smaller
// half goes to exposure when the count is odd). Throws kMissingQuestionType.
TypeSplit split_by_type(const std::vector<QaItem>& dataset, std::uint64_t seed);

Scenarios make_scenarios(const std::vector<QaItem>& dataset, const Rewriter& rewriter,
                         std::uint64_t seed);

nlohmann::json reports_to_json(const std::vector<TurnReport>& reports, bool include_timing = false);
std::string reports_to_csv(const std::vector<TurnReport>& reports, bool include_timing = false);

}  // namespace gamrag::eval
