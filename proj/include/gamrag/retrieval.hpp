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

// Memory-guided iterative retrieval over a HierGraph.
//
// One iteration t:
//   u_t      = M_ES^T a_t                          (entity -> sentence)
//   raw_i    = w_sent_i * u_t[i]                   (memory-gated)
//   score_t  = raw / sum(raw)                      (L1 over candidates)
//   selected = top-K_S sentences of score_t
//   bonus_t  = M_SP^T (score_t restricted to selected)
//   score(p) = alpha sim(p, q) + sum_{tau<=t} ln(1 + bonus_tau[p]) / tau
//   a_{t+1}  = top-K_E of mean-over-incident-sentences(selected scores)
//
// with w_sent_i = max(sem_floor, cos(s_i, q)) * g_task * g_time and
// g = 1 + (1 - pi) cos(m, q). The loop stops when the sufficiency judge says
// yes, when propagation yields no candidate, or after max_iterations.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamrag/graph.hpp"
#include "gamrag/memory.hpp"
#include "json.hpp"

namespace gamrag {

struct QueryContext {
  std::string id;
  std::string text;
  Vector q;
  std::vector<std::string> entities;       // canonical surfaces
  std::vector<Vector> entity_embeddings;   // parallel to entities
  std::optional<std::string> time_expr;
  std::optional<Vector> q_time;            // nullopt: NO_TIME

  bool has_time() const { return q_time.has_value(); }
  FeedbackQuery feedback_query() const { return {q, q_time}; }
};

// Embeds the question, extracts and canonicalizes its entities, and embeds
// its temporal constraint when one is found. An empty id is replaced by a
// content-derived one.
QueryContext make_query_context(std::string_view text, const AdapterRegistry& adapters,
                                std::string id = {});

struct RetrievalConfig {
  int max_iterations = 3;
  int k_sentences = 3;
  int k_entities = 5;
  int k_passages = 5;
  double alpha = 0.01;
  double sem_floor = 0.0;

  void validate() const;
};

// Nearest graph entity per query entity, scored by cosine; several query
// entities hitting one node keep the max. Entity-free queries give a zero
// vector. Throws kEmptyGraph when the query has entities but the graph none.
Vector activate_entities(const QueryContext& query, const HierGraph& graph);

struct Gate {
  double g_task = 1.0;
  double g_time = 1.0;
  double w_sent = 0.0;
};

Gate sentence_gate(const SentenceMemory& memory, std::span<const double> sentence_embedding,
                   const QueryContext& query, double sem_floor = 0.0);

// Memory-free weight: the semantic term alone (all gates pinned at 1).
double semantic_weight(std::span<const double> sentence_embedding, const QueryContext& query,
                       double sem_floor = 0.0);

// w_sent for every sentence. A null store means no memory (neutral gates).
Vector sentence_weights(const HierGraph& graph, const MemoryStore* store,
                        const QueryContext& query, double sem_floor = 0.0);

// L1-normalized sentence scores for one iteration. On the entity-free path
// every sentence is a candidate with raw score w_sent.
Vector propagate_iteration(const HierGraph& graph, std::span<const double> weights,
                           std::span<const double> activation, bool entity_free = false);
Vector propagate_iteration(const HierGraph& graph, const MemoryStore* store,
                           const QueryContext& query, std::span<const double> activation,
                           double sem_floor = 0.0, bool entity_free = false);

// Indices of the k highest positive entries, descending, ties by ascending index.
std::vector<std::uint32_t> top_k_positive(std::span<const double> scores, std::size_t k);

struct RankedPassage {
  PassageIndex passage = 0;
  double score = 0.0;

  friend bool operator==(const RankedPassage&, const RankedPassage&) = default;
};

// alpha * sim + sum_t ln(1 + bonus_t) / t, sorted descending with ties broken
// by ascending passage index.
std::vector<RankedPassage> score_passages(std::span<const double> sims,
                                          const std::vector<Vector>& bonus_history, double alpha);

// Next activation: top-K_E truncation of the per-entity sentence mean.
Vector reactivate(const HierGraph& graph, std::span<const double> selected_scores,
                  std::size_t k_entities);

using SparseEntry = std::pair<std::uint32_t, double>;

struct IterationTrace {
  int t = 0;
  std::vector<SparseEntry> activation;   // nonzero entity activations
  std::vector<SparseEntry> selected;     // top-K_S sentences in rank order
  std::vector<SparseEntry> bonus;        // nonzero passage bonuses
  std::vector<RankedPassage> ranking;    // top k_passages after this iteration
  std::optional<bool> sufficient;        // unset when nothing was selected
};

enum class StopReason { kSufficient, kMaxIterations, kEmptyPropagation };
std::string_view stop_reason_name(StopReason r);

struct RetrievalEpisode {
  std::string query_id;
  std::string query_text;
  std::vector<IterationTrace> iterations;
  std::vector<RankedPassage> ranking;   // full final ranking
  std::vector<SentenceId> judged;       // union of sentences shown to the judge, ascending
  StopReason stop = StopReason::kMaxIterations;
  double latency_ms = 0.0;              // engine wall-clock, judge time excluded
  double adapter_ms = 0.0;
  TokenUsage adapter_tokens;

  int iteration_count() const { return static_cast<int>(iterations.size()); }
  std::vector<PassageIndex> top_passages(std::size_t k) const;
};

// Raised when an adapter fails mid-retrieval; carries the partial episode.
class RetrievalFailure : public Error {
 public:
  RetrievalFailure(const Error& cause, RetrievalEpisode partial)
      : Error(cause.code(), cause.what()), partial_(std::move(partial)) {}
  const RetrievalEpisode& partial() const { return partial_; }

 private:
  RetrievalEpisode partial_;
};

// Runs the full loop. `store` may be null for a memory-free baseline.
RetrievalEpisode retrieve(const HierGraph& graph, const MemoryStore* store,
                          const QueryContext& query, const RetrievalConfig& config,
                          const SufficiencyJudge& judge);

// Episode trace export. Timing fields are only written when requested so that
// default traces are byte-reproducible.
nlohmann::json episode_to_json(const RetrievalEpisode& episode, const HierGraph& graph,
                               int k_passages, bool include_timing = false);

struct EpisodeHeader {
  std::string query_id;
  std::string query_text;
  std::vector<SentenceId> judged;
};
EpisodeHeader episode_header_from_json(const nlohmann::json& j);

}  // namespace gamrag
