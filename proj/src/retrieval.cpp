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

#include "gamrag/retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "gamrag/hash.hpp"

namespace gamrag {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<SparseEntry> nonzero(std::span<const double> v) {
  std::vector<SparseEntry> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  }
  return out;
}

std::vector<RankedPassage> head(const std::vector<RankedPassage>& ranking, std::size_t k) {
  return {ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranking.size()))};
}

nlohmann::json sparse_json(const std::vector<SparseEntry>& entries) {
  auto arr = nlohmann::json::array();
  for (const auto& [id, v] : entries) arr.push_back({id, v});
  return arr;
}

nlohmann::json ranking_json(const std::vector<RankedPassage>& ranking, const HierGraph& graph) {
  auto arr = nlohmann::json::array();
  for (const auto& r : ranking) {
    arr.push_back({{"passage", graph.passages().at(r.passage).id},
                   {"index", r.passage},
                   {"score", r.score}});
  }
  return arr;
}

}  // namespace

QueryContext make_query_context(std::string_view text, const AdapterRegistry& adapters,
                                std::string id) {
  if (text.empty()) throw Error(Errc::kInvalidArgument, "empty query");
  if (!adapters.embedder || !adapters.ner || !adapters.time_extractor) {
    throw Error(Errc::kInvalidArgument, "query context needs embedder, ner and time extractor");
  }
  const Embedder& embedder = *adapters.embedder;
  auto embed = [&](std::string_view s) {
    return call_adapter("embedder", [&] { return embedder.embed(s); });
  };

  QueryContext ctx;
  ctx.id = id.empty() ? "q-" + hex64(fnv1a(text)) : std::move(id);
  ctx.text = std::string(text);
  ctx.q = embed(text);
  ctx.entities = extract_entities(text, *adapters.ner);
  for (const auto& e : ctx.entities) ctx.entity_embeddings.push_back(embed(e));
  ctx.time_expr = call_adapter("time extractor", [&] { return adapters.time_extractor->extract(text); });
  if (ctx.time_expr && ctx.time_expr->empty()) ctx.time_expr.reset();
  if (ctx.time_expr) ctx.q_time = embed(*ctx.time_expr);
  return ctx;
}

void RetrievalConfig::validate() const {
  if (max_iterations < 1 || k_sentences < 1 || k_entities < 1 || k_passages < 1) {
    throw Error(Errc::kInvalidArgument, "iteration and top-k limits must be >= 1");
  }
  if (!(alpha >= 0.0)) throw Error(Errc::kInvalidArgument, "alpha must be >= 0");
  if (!(sem_floor >= 0.0 && sem_floor <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "sem_floor must lie in [0, 1]");
  }
}

Vector activate_entities(const QueryContext& query, const HierGraph& graph) {
  Vector a(graph.num_entities(), 0.0);
  if (query.entities.empty()) return a;
  if (graph.num_entities() == 0) {
    throw Error(Errc::kEmptyGraph, "query has entities but the graph has no entity nodes");
  }
  for (const auto& qe : query.entity_embeddings) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < graph.num_entities(); ++j) {
      const double s = cosine(qe, graph.entities()[j].embedding);
      if (s > best_score) {
        best_score = s;
        best = j;
      }
    }
    // No alignment threshold; only negative similarities are dropped.
    a[best] = std::max(a[best], best_score);
  }
  return a;
}

double semantic_weight(std::span<const double> sentence_embedding, const QueryContext& query,
                       double sem_floor) {
  return std::max(sem_floor, cosine(sentence_embedding, query.q));
}

Gate sentence_gate(const SentenceMemory& memory, std::span<const double> sentence_embedding,
                   const QueryContext& query, double sem_floor) {
  Gate g;
  g.g_task = 1.0 + (1.0 - memory.pi_task) * cosine(memory.m_task, query.q);
  if (query.q_time) g.g_time = 1.0 + (1.0 - memory.pi_time) * cosine(memory.m_time, *query.q_time);
  g.w_sent = semantic_weight(sentence_embedding, query, sem_floor) * g.g_task * g.g_time;
  return g;
}

Vector sentence_weights(const HierGraph& graph, const MemoryStore* store,
                        const QueryContext& query, double sem_floor) {
  Vector w(graph.num_sentences(), 0.0);
  for (const auto& s : graph.sentences()) {
    w[s.id] = store != nullptr ? sentence_gate(store->at(s.id), s.embedding, query, sem_floor).w_sent
                               : semantic_weight(s.embedding, query, sem_floor);
  }
  return w;
}

Vector propagate_iteration(const HierGraph& graph, std::span<const double> weights,
                           std::span<const double> activation, bool entity_free) {
  if (weights.size() != graph.num_sentences()) {
    throw Error(Errc::kDimensionMismatch, "one weight per sentence expected");
  }
  Vector raw(graph.num_sentences(), 0.0);
  if (entity_free) {
    std::copy(weights.begin(), weights.end(), raw.begin());
  } else {
    const Vector u = ent_to_sent(graph, activation);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (u[i] > 0.0) raw[i] = weights[i] * u[i];
    }
  }
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(total > 0.0)) return Vector(raw.size(), 0.0);
  for (double& x : raw) x /= total;
  return raw;
}

Vector propagate_iteration(const HierGraph& graph, const MemoryStore* store,
                           const QueryContext& query, std::span<const double> activation,
                           double sem_floor, bool entity_free) {
  const Vector w = sentence_weights(graph, store, query, sem_floor);
  return propagate_iteration(graph, w, activation, entity_free);
}

std::vector<std::uint32_t> top_k_positive(std::span<const double> scores, std::size_t k) {
  std::vector<std::uint32_t> idx;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > 0.0) idx.push_back(static_cast<std::uint32_t>(i));
  }
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
  };
  if (idx.size() > k) {
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), better);
    idx.resize(k);
  } else {
    std::sort(idx.begin(), idx.end(), better);
  }
  return idx;
}

std::vector<RankedPassage> score_passages(std::span<const double> sims,
                                          const std::vector<Vector>& bonus_history, double alpha) {
  if (bonus_history.empty()) throw Error(Errc::kInvalidArgument, "empty bonus history");
  std::vector<RankedPassage> out(sims.size());
  for (std::size_t p = 0; p < sims.size(); ++p) out[p] = {static_cast<PassageIndex>(p), alpha * sims[p]};
  for (std::size_t t = 0; t < bonus_history.size(); ++t) {
    const Vector& bonus = bonus_history[t];
    if (bonus.size() != sims.size()) {
      throw Error(Errc::kDimensionMismatch, "bonus vector size differs from passage count");
    }
    const double tier = static_cast<double>(t + 1);
    for (std::size_t p = 0; p < sims.size(); ++p) {
      if (bonus[p] != 0.0) out[p].score += std::log1p(bonus[p]) / tier;
    }
  }
  std::sort(out.begin(), out.end(), [](const RankedPassage& a, const RankedPassage& b) {
    return a.score != b.score ? a.score > b.score : a.passage < b.passage;
  });
  return out;
}

Vector reactivate(const HierGraph& graph, std::span<const double> selected_scores,
                  std::size_t k_entities) {
  const Vector mean = sent_to_ent_avg(graph, selected_scores);
  Vector out(mean.size(), 0.0);
  for (std::uint32_t j : top_k_positive(mean, k_entities)) out[j] = mean[j];
  return out;
}

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kSufficient: return "sufficient";
    case StopReason::kMaxIterations: return "max_iterations";
    case StopReason::kEmptyPropagation: return "empty_propagation";
  }
  return "unknown";
}

std::vector<PassageIndex> RetrievalEpisode::top_passages(std::size_t k) const {
  std::vector<PassageIndex> out;
  for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) out.push_back(ranking[i].passage);
  return out;
}

RetrievalEpisode retrieve(const HierGraph& graph, const MemoryStore* store,
                          const QueryContext& query, const RetrievalConfig& config,
                          const SufficiencyJudge& judge) {
  config.validate();
  if (store != nullptr) store->check_binding(graph);
  if (query.q.size() != graph.dim()) {
    throw Error(Errc::kDimensionMismatch, "query embedding dimension differs from the graph's");
  }

  const auto start = Clock::now();
  const TokenUsage tokens_before = judge.usage();
  RetrievalEpisode ep;
  ep.query_id = query.id;
  ep.query_text = query.text;

  const Vector weights = sentence_weights(graph, store, query, config.sem_floor);
  Vector sims(graph.num_passages());
  for (std::size_t p = 0; p < sims.size(); ++p) sims[p] = cosine(graph.passages()[p].embedding, query.q);

  Vector activation = activate_entities(query, graph);
  const bool entity_free = query.entities.empty();
  std::vector<Vector> history;
  const auto k_sent = static_cast<std::size_t>(config.k_sentences);
  const auto k_pass = static_cast<std::size_t>(config.k_passages);

  for (int t = 1; t <= config.max_iterations; ++t) {
    IterationTrace trace;
    trace.t = t;
    trace.activation = nonzero(activation);

    const Vector scores = propagate_iteration(graph, weights, activation, entity_free && t == 1);
    const auto selected = top_k_positive(scores, k_sent);
    Vector w(graph.num_sentences(), 0.0);
    for (std::uint32_t s : selected) {
      w[s] = scores[s];
      trace.selected.emplace_back(s, scores[s]);
    }
    Vector bonus = sent_to_pass(graph, w);
    trace.bonus = nonzero(bonus);
    history.push_back(std::move(bonus));
    ep.ranking = score_passages(sims, history, config.alpha);
    trace.ranking = head(ep.ranking, k_pass);

    if (selected.empty()) {
      ep.iterations.push_back(std::move(trace));
      ep.stop = StopReason::kEmptyPropagation;
      break;
    }

    std::vector<JudgedSentence> shown;
    for (std::uint32_t s : selected) {
      shown.push_back({s, graph.sentences()[s].text});
      ep.judged.push_back(s);
    }
    const auto judge_start = Clock::now();
    bool verdict = false;
    try {
      verdict = judge_sufficiency(judge, query.text, shown);
    } catch (const Error& e) {
      ep.adapter_ms += ms_since(judge_start);
      ep.iterations.push_back(std::move(trace));
      std::sort(ep.judged.begin(), ep.judged.end());
      ep.judged.erase(std::unique(ep.judged.begin(), ep.judged.end()), ep.judged.end());
      throw RetrievalFailure(e, std::move(ep));
    }
    ep.adapter_ms += ms_since(judge_start);
    trace.sufficient = verdict;
    ep.iterations.push_back(std::move(trace));

    if (verdict) {
      ep.stop = StopReason::kSufficient;
      break;
    }
    if (t == config.max_iterations) {
      ep.stop = StopReason::kMaxIterations;
      break;
    }
    activation = reactivate(graph, w, static_cast<std::size_t>(config.k_entities));
  }

  std::sort(ep.judged.begin(), ep.judged.end());
  ep.judged.erase(std::unique(ep.judged.begin(), ep.judged.end()), ep.judged.end());
  ep.adapter_tokens = judge.usage() - tokens_before;
  ep.latency_ms = std::max(0.0, ms_since(start) - ep.adapter_ms);
  return ep;
}

nlohmann::json episode_to_json(const RetrievalEpisode& episode, const HierGraph& graph,
                               int k_passages, bool include_timing) {
  nlohmann::json j;
  j["format"] = "gamepisode/1";
  j["query"] = {{"id", episode.query_id}, {"text", episode.query_text}};
  j["iteration_count"] = episode.iteration_count();
  j["stop_reason"] = stop_reason_name(episode.stop);
  auto iters = nlohmann::json::array();
  for (const auto& it : episode.iterations) {
    nlohmann::json ji;
    ji["t"] = it.t;
    ji["activation"] = sparse_json(it.activation);
    ji["selected"] = sparse_json(it.selected);
    ji["bonus"] = sparse_json(it.bonus);
    ji["ranking"] = ranking_json(it.ranking, graph);
    ji["sufficient"] = it.sufficient ? nlohmann::json(*it.sufficient) : nlohmann::json(nullptr);
    iters.push_back(std::move(ji));
  }
  j["iterations"] = std::move(iters);
  j["ranking"] = ranking_json(head(episode.ranking, static_cast<std::size_t>(std::max(k_passages, 0))), graph);
  j["judged_candidates"] = episode.judged;
  j["adapter_tokens"] = {{"in", episode.adapter_tokens.in}, {"out", episode.adapter_tokens.out}};
  if (include_timing) {
    j["timing"] = {{"latency_ms", episode.latency_ms}, {"adapter_ms", episode.adapter_ms}};
  }
  return j;
}

EpisodeHeader episode_header_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "gamepisode/1") {
      throw Error(Errc::kVersionMismatch, "unsupported episode format");
    }
    EpisodeHeader h;
    h.query_id = j.at("query").at("id").get<std::string>();
    h.query_text = j.at("query").at("text").get<std::string>();
    h.judged = j.at("judged_candidates").get<std::vector<SentenceId>>();
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParseError, std::string("episode trace: ") + e.what());
  }
}

}  // namespace gamrag
