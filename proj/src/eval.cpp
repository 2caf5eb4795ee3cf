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

#include "gamrag/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "gamrag/hash.hpp"
#include "gamrag/text.hpp"

namespace gamrag::eval {
namespace {

std::string normalize_answer(std::string_view s) { return text::collapse_whitespace(text::lower(s)); }

std::vector<std::string> f1_tokens(std::string_view s) {
  std::string cleaned;
  cleaned.reserve(s.size());
  for (char c : text::lower(s)) {
    if (!text::is_punct(c)) cleaned.push_back(c);
  }
  std::vector<std::string> out;
  for (auto tok : text::split_ws(cleaned)) out.emplace_back(tok);
  return out;
}

struct PassAccumulator {
  TurnReport report;
  double contain = 0.0;
  double f1 = 0.0;
  double judged_correct = 0.0;
  double iterations = 0.0;
  double latency = 0.0;
  double adapter_ms = 0.0;
  std::size_t answered = 0;

  void finish(bool has_answer_judge) {
    const auto n = static_cast<double>(report.items);
    report.contain_acc = report.items ? contain / n : 0.0;
    report.token_f1 = report.items ? f1 / n : 0.0;
    if (has_answer_judge) report.judge_acc = report.items ? judged_correct / n : 0.0;
    const auto a = static_cast<double>(answered);
    report.mean_iterations = answered ? iterations / a : 0.0;
    report.mean_latency_ms = answered ? latency / a : 0.0;
    report.mean_adapter_ms = answered ? adapter_ms / a : 0.0;
  }
};

// One pass over `items`. Feedback is applied after every item when enabled.
TurnReport run_pass(const std::vector<QaItem>& items, int turn, bool feedback,
                    const HierGraph& graph, MemoryStore& store, const RetrievalConfig& config,
                    const AdapterRegistry& adapters, const RunOptions& options) {
  PassAccumulator acc;
  acc.report.turn = turn;
  acc.report.items = items.size();
  const TokenUsage tokens_before = adapters.total_usage();
  const auto k = static_cast<std::size_t>(config.k_passages);

  for (std::size_t i = 0; i < items.size(); ++i) {
    const QaItem& item = items[i];
    std::string episode_id = "t" + std::to_string(turn) + "-i" + std::to_string(i);
    acc.report.episode_ids.push_back(episode_id);
    try {
      const QueryContext ctx = make_query_context(item.question, adapters, std::move(episode_id));
      const RetrievalEpisode ep = retrieve(graph, &store, ctx, config, *adapters.sufficiency_judge);
      if (options.on_episode) options.on_episode(turn, i, ep);

      std::vector<std::string> evidence;
      for (PassageIndex p : ep.top_passages(k)) evidence.push_back(graph.passages()[p].text);
      std::string prediction;
      if (adapters.generator) {
        prediction = call_adapter("generator",
                                  [&] { return adapters.generator->generate(item.question, evidence); });
      } else {
        // Without a generator the retrieved evidence itself is scored.
        for (const auto& e : evidence) {
          if (!prediction.empty()) prediction.push_back('\n');
          prediction += e;
        }
      }

      const int contain = contain_acc(prediction, item.answers);
      const double f1 = best_token_f1(prediction, item.answers);
      bool judged_correct = false;
      if (adapters.answer_judge) {
        judged_correct = call_adapter("answer judge", [&] {
          return adapters.answer_judge->correct(item.question, prediction, item.answers);
        });
      }

      if (feedback) {
        std::vector<JudgedSentence> shown;
        for (SentenceId s : ep.judged) shown.push_back({s, graph.sentences()[s].text});
        const std::string_view answer =
            adapters.generator ? std::string_view(prediction) : std::string_view(item.answers.front());
        std::vector<SentenceId> support;
        if (!shown.empty()) support = judge_support(*adapters.support_judge, item.question, answer, shown);
        std::map<SentenceId, Label> labels;
        for (SentenceId s : ep.judged) labels[s] = Label::kNonSupportive;
        for (SentenceId s : support) labels[s] = Label::kSupportive;
        apply_feedback(store, graph, ctx.feedback_query(), labels);
      }

      acc.contain += contain;
      acc.f1 += f1;
      acc.judged_correct += judged_correct ? 1.0 : 0.0;
      acc.iterations += ep.iteration_count();
      acc.latency += ep.latency_ms;
      acc.adapter_ms += ep.adapter_ms;
      ++acc.answered;
    } catch (const Error& e) {
      if (e.code() != Errc::kAdapterFailure) throw;
      ++acc.report.failed_items;
    }
  }
  acc.finish(adapters.answer_judge != nullptr);
  acc.report.adapter_tokens = adapters.total_usage() - tokens_before;
  acc.report.memory_revision = store.revision();
  return acc.report;
}

void check_run(const RunOptions& options, const HierGraph& graph, const MemoryStore& store,
               const AdapterRegistry& adapters) {
  if (options.turns < 1) throw Error(Errc::kInvalidArgument, "turns must be >= 1");
  if (options.first_turn < 0) throw Error(Errc::kInvalidArgument, "first_turn must be >= 0");
  if (!adapters.sufficiency_judge || !adapters.support_judge) {
    throw Error(Errc::kInvalidArgument, "evaluation needs sufficiency and support judges");
  }
  store.check_binding(graph);
}

}  // namespace

std::vector<QaItem> read_dataset_jsonl(std::string_view content) {
  std::vector<QaItem> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    const std::string line(content.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (text::collapse_whitespace(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      QaItem item;
      item.question = j.at("question").get<std::string>();
      item.answers = j.at("answers").get<std::vector<std::string>>();
      if (j.contains("question_type") && !j.at("question_type").is_null()) {
        item.question_type = j.at("question_type").get<std::string>();
      }
      if (j.contains("gold_support_ids")) {
        item.gold_support_ids = j.at("gold_support_ids").get<std::vector<SentenceId>>();
      }
      if (item.question.empty() || item.answers.empty()) {
        throw Error(Errc::kParseError, "question and answers must be non-empty");
      }
      out.push_back(std::move(item));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParseError, "dataset line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(Errc::kParseError, "dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) throw Error(Errc::kParseError, "dataset is empty");
  return out;
}

std::map<std::string, std::vector<SentenceId>, std::less<>> gold_table(const std::vector<QaItem>& items) {
  std::map<std::string, std::vector<SentenceId>, std::less<>> table;
  for (const auto& item : items) {
    auto& ids = table[item.question];
    ids.insert(ids.end(), item.gold_support_ids.begin(), item.gold_support_ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return table;
}

int contain_acc(std::string_view prediction, std::span<const std::string> gold_answers) {
  const std::string pred = normalize_answer(prediction);
  for (const auto& g : gold_answers) {
    const std::string gold = normalize_answer(g);
    if (!gold.empty() && pred.find(gold) != std::string::npos) return 1;
  }
  return 0;
}

double token_f1(std::string_view prediction, std::string_view gold) {
  const auto p = f1_tokens(prediction);
  const auto g = f1_tokens(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string_view, int> counts;
  for (const auto& t : g) ++counts[t];
  int common = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(p.size());
  const double recall = static_cast<double>(common) / static_cast<double>(g.size());
  return 2.0 * precision * recall / (precision + recall);
}

double best_token_f1(std::string_view prediction, std::span<const std::string> gold_answers) {
  double best = 0.0;
  for (const auto& g : gold_answers) best = std::max(best, token_f1(prediction, g));
  return best;
}

std::vector<TurnReport> run_memorization(const std::vector<QaItem>& dataset, const HierGraph& graph,
                                         MemoryStore& store, const RetrievalConfig& config,
                                         const AdapterRegistry& adapters, const RunOptions& options) {
  check_run(options, graph, store, adapters);
  std::vector<TurnReport> reports;
  for (int k = 0; k < options.turns; ++k) {
    const int turn = options.first_turn + k;
    reports.push_back(run_pass(dataset, turn, options.feedback, graph, store, config, adapters, options));
    if (options.on_turn_end) options.on_turn_end(turn, store);
  }
  return reports;
}

std::vector<TurnReport> run_transfer(const std::vector<QaItem>& exposure,
                                     const std::vector<QaItem>& evaluation, const HierGraph& graph,
                                     MemoryStore& store, const RetrievalConfig& config,
                                     const AdapterRegistry& adapters, const RunOptions& options) {
  check_run(options, graph, store, adapters);
  std::vector<TurnReport> reports;
  for (int k = 0; k < options.turns; ++k) {
    const int turn = options.first_turn + k;
    reports.push_back(run_pass(evaluation, turn, false, graph, store, config, adapters, options));
    if (options.feedback) {
      run_pass(exposure, turn, true, graph, store, config, adapters, RunOptions{});
    }
    if (options.on_turn_end) options.on_turn_end(turn, store);
  }
  return reports;
}

std::vector<QaItem> make_similar(const std::vector<QaItem>& dataset, const Rewriter& rewriter) {
  std::vector<QaItem> out = dataset;
  for (auto& item : out) item.question = rewrite_similar(rewriter, item.question);
  return out;
}

TypeSplit split_by_type(const std::vector<QaItem>& dataset, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_type;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!dataset[i].question_type) {
      throw Error(Errc::kMissingQuestionType, "item " + std::to_string(i) + " has no question_type");
    }
    by_type[*dataset[i].question_type].push_back(i);
  }
  TypeSplit split;
  for (auto& [type, idx] : by_type) {
    SplitMix rng(seed ^ fnv1a(type));
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    const std::size_t half = idx.size() / 2;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      (i < half ? split.exposure : split.evaluation).push_back(dataset[idx[i]]);
    }
  }
  return split;
}

Scenarios make_scenarios(const std::vector<QaItem>& dataset, const Rewriter& rewriter,
                         std::uint64_t seed) {
  Scenarios s;
  s.same = dataset;
  s.similar = make_similar(dataset, rewriter);
  s.different = split_by_type(dataset, seed);
  return s;
}

nlohmann::json reports_to_json(const std::vector<TurnReport>& reports, bool include_timing) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["turn"] = r.turn;
    j["items"] = r.items;
    j["failed_items"] = r.failed_items;
    j["contain_acc"] = r.contain_acc;
    j["token_f1"] = r.token_f1;
    j["judge_acc"] = r.judge_acc ? nlohmann::json(*r.judge_acc) : nlohmann::json(nullptr);
    j["mean_iterations"] = r.mean_iterations;
    j["adapter_tokens"] = {{"in", r.adapter_tokens.in}, {"out", r.adapter_tokens.out}};
    j["memory_revision"] = r.memory_revision;
    j["episode_ids"] = r.episode_ids;
    if (include_timing) {
      j["mean_latency_ms"] = r.mean_latency_ms;
      j["mean_adapter_ms"] = r.mean_adapter_ms;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string reports_to_csv(const std::vector<TurnReport>& reports, bool include_timing) {
  std::ostringstream os;
  os << "turn,items,failed_items,contain_acc,token_f1,judge_acc,mean_iterations,adapter_tokens";
  if (include_timing) os << ",mean_latency_ms,mean_adapter_ms";
  os << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const auto& r : reports) {
    os << r.turn << ',' << r.items << ',' << r.failed_items << ',' << num(r.contain_acc) << ','
       << num(r.token_f1) << ',' << (r.judge_acc ? num(*r.judge_acc) : std::string()) << ','
       << num(r.mean_iterations) << ',' << r.adapter_tokens.total();
    if (include_timing) os << ',' << num(r.mean_latency_ms) << ',' << num(r.mean_adapter_ms);
    os << '\n';
  }
  return os.str();
}

}  // namespace gamrag::eval
