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

// Per-sentence task/time memories and the gain-adaptive update that moves
// them after a judged retrieval episode.
//
// For one channel, with query direction q (unit), judge target y and
// observation noise R:
//
//   e  = y - cos(q, m)                 residual
//   K  = pi / (pi + R)                 gain
//   m' = m + K e q                     state correction along q only
//   pi'= clip01((1 - K) pi + Q)        perplexity with process noise Q
//
// With the default renormalize_state = false the correction leaves every
// component of m orthogonal to q untouched, and for unit m the raw projection
// obeys <q, m'> = (1 - K) <q, m> + K y exactly.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gamrag/graph.hpp"

namespace gamrag {

inline constexpr std::string_view kMemoryFormat = "gammem/1";

struct UpdateConfig {
  double r_pos = 0.5;
  double r_neg = 1.0;
  double q_task = 0.01;
  double q_time = 0.01;
  double y_pos = 1.0;
  double y_neg = 0.0;
  bool renormalize_state = false;

  // Throws kInvalidArgument unless r_neg >= r_pos > 0 and 0 <= q < 1.
  void validate() const;

  friend bool operator==(const UpdateConfig&, const UpdateConfig&) = default;
};

struct SentenceMemory {
  Vector m_task;
  Vector m_time;
  double pi_task = 1.0;
  double pi_time = 1.0;
  std::uint64_t update_count_task = 0;
  std::uint64_t update_count_time = 0;

  friend bool operator==(const SentenceMemory&, const SentenceMemory&) = default;
};

enum class Channel { kTask, kTime };
std::string_view channel_name(Channel c);

enum class Label { kSupportive, kNonSupportive };

struct FeedbackRecord {
  SentenceId sentence = 0;
  Channel channel = Channel::kTask;
  double y = 0.0;
  double residual = 0.0;
  double gain = 0.0;
  double pi_before = 0.0;
  double pi_after = 0.0;
  std::uint64_t applied_at_revision = 0;
};

// Query-side inputs of an update: the task direction and, for temporal
// queries, the time direction.
struct FeedbackQuery {
  Vector q;
  std::optional<Vector> q_time;  // nullopt for NO_TIME queries
};

// m_task is the sentence embedding; m_time embeds the time expression or the
// NO_TIME sentinel; both perplexities start at 1.
SentenceMemory init_memory(const Sentence& sentence, const Embedder& embedder);

// y - cos(q, m). Throws kZeroVector when m has zero length.
double residual(double y, std::span<const double> q, std::span<const double> m);

double kalman_gain(double pi, double r);

Vector update_state(std::span<const double> m, double gain, double residual,
                    std::span<const double> q, bool renormalize);

double update_perplexity(double pi, double gain, double q_noise);

// Dense array of sentence memories bound to one graph. Single writer: feedback
// episodes must be applied one at a time.
class MemoryStore {
 public:
  // Fresh neutral memories for every sentence of the graph.
  static MemoryStore initialize(const HierGraph& graph, const Embedder& embedder,
                                UpdateConfig config = {});

  const std::vector<SentenceMemory>& entries() const { return entries_; }
  const SentenceMemory& at(SentenceId id) const { return entries_.at(id); }
  std::size_t size() const { return entries_.size(); }
  const UpdateConfig& config() const { return config_; }
  void set_config(const UpdateConfig& config);
  std::uint64_t revision() const { return revision_; }
  std::uint64_t graph_hash() const { return graph_hash_; }

  // Throws kStaleGraphBinding unless this store was built for `graph`.
  void check_binding(const HierGraph& graph) const;

  std::string snapshot() const;
  static MemoryStore restore(std::string_view bytes, const HierGraph& graph);

  friend bool operator==(const MemoryStore&, const MemoryStore&) = default;

 private:
  friend std::vector<FeedbackRecord> apply_feedback(MemoryStore&, const HierGraph&,
                                                    const FeedbackQuery&,
                                                    const std::map<SentenceId, Label>&);
  std::vector<SentenceMemory> entries_;
  UpdateConfig config_;
  std::uint64_t revision_ = 0;
  std::uint64_t graph_hash_ = 0;
};

// Applies one episode of judged feedback. Every labeled sentence yields a task
// record and a time record (ascending sentence id, task before time). For
// NO_TIME queries the time record carries gain 0 and leaves the time memory
// untouched. The revision advances once, even for an empty label set.
std::vector<FeedbackRecord> apply_feedback(MemoryStore& store, const HierGraph& graph,
                                           const FeedbackQuery& query,
                                           const std::map<SentenceId, Label>& labels);

}  // namespace gamrag
