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

#include "gamrag/memory.hpp"

#include <algorithm>
#include <cmath>

#include "gamrag/binio.hpp"

namespace gamrag {

void UpdateConfig::validate() const {
  if (!(r_pos > 0.0) || !(r_neg > 0.0)) {
    throw Error(Errc::kInvalidArgument, "observation noise must be positive");
  }
  if (r_neg < r_pos) throw Error(Errc::kInvalidArgument, "r_neg must be >= r_pos");
  if (!(q_task >= 0.0 && q_task < 1.0) || !(q_time >= 0.0 && q_time < 1.0)) {
    throw Error(Errc::kInvalidArgument, "process noise must lie in [0, 1)");
  }
}

std::string_view channel_name(Channel c) { return c == Channel::kTask ? "task" : "time"; }

SentenceMemory init_memory(const Sentence& sentence, const Embedder& embedder) {
  SentenceMemory m;
  m.m_task = sentence.embedding;
  const std::string_view time_text =
      sentence.time_expr ? std::string_view(*sentence.time_expr) : kNoTimeSentinel;
  m.m_time = call_adapter("embedder", [&] { return embedder.embed(time_text); });
  if (m.m_time.size() != m.m_task.size()) {
    throw Error(Errc::kAdapterFailure, "time embedding dimension differs from sentence embedding");
  }
  return m;
}

double residual(double y, std::span<const double> q, std::span<const double> m) {
  if (!is_unit(q)) throw Error(Errc::kInvalidArgument, "query direction must be unit norm");
  const double nm = norm(m);
  if (nm == 0.0) throw Error(Errc::kZeroVector, "memory vector has zero length");
  return y - dot(q, m) / nm;
}

double kalman_gain(double pi, double r) { return pi / (pi + r); }

Vector update_state(std::span<const double> m, double gain, double residual,
                    std::span<const double> q, bool renormalize) {
  if (m.size() != q.size()) throw Error(Errc::kDimensionMismatch, "memory and query dims differ");
  Vector out(m.begin(), m.end());
  const double step = gain * residual;
  if (step != 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += step * q[i];
  }
  if (renormalize) out = normalized(out);
  return out;
}

double update_perplexity(double pi, double gain, double q_noise) {
  return std::clamp((1.0 - gain) * pi + q_noise, 0.0, 1.0);
}

MemoryStore MemoryStore::initialize(const HierGraph& graph, const Embedder& embedder,
                                    UpdateConfig config) {
  config.validate();
  if (embedder.dim() != graph.dim()) {
    throw Error(Errc::kDimensionMismatch, "embedder dimension differs from the graph's");
  }
  MemoryStore store;
  store.config_ = config;
  store.graph_hash_ = graph.content_hash();
  store.entries_.reserve(graph.num_sentences());
  for (const auto& s : graph.sentences()) store.entries_.push_back(init_memory(s, embedder));
  return store;
}

void MemoryStore::set_config(const UpdateConfig& config) {
  config.validate();
  config_ = config;
}

void MemoryStore::check_binding(const HierGraph& graph) const {
  if (entries_.size() != graph.num_sentences() || graph_hash_ != graph.content_hash()) {
    throw Error(Errc::kStaleGraphBinding, "memory store is bound to a different graph");
  }
}

std::string MemoryStore::snapshot() const {
  binio::Writer w;
  w.magic(kMemoryFormat);
  w.magic("\n");
  w.u64(graph_hash_);
  w.u64(revision_);
  w.f64(config_.r_pos);
  w.f64(config_.r_neg);
  w.f64(config_.q_task);
  w.f64(config_.q_time);
  w.f64(config_.y_pos);
  w.f64(config_.y_neg);
  w.u8(config_.renormalize_state ? 1 : 0);
  const std::size_t dim = entries_.empty() ? 0 : entries_.front().m_task.size();
  w.u64(entries_.size());
  w.u64(dim);
  for (const auto& e : entries_) {
    for (double x : e.m_task) w.f64(x);
    for (double x : e.m_time) w.f64(x);
    w.f64(e.pi_task);
    w.f64(e.pi_time);
    w.u64(e.update_count_task);
    w.u64(e.update_count_time);
  }
  return std::move(w).bytes();
}

MemoryStore MemoryStore::restore(std::string_view bytes, const HierGraph& graph) {
  binio::Reader r(bytes);
  if (!r.magic(kMemoryFormat) || !r.magic("\n")) {
    if (bytes.substr(0, 7) == "gammem/") {
      throw Error(Errc::kVersionMismatch, "unsupported memory snapshot version");
    }
    throw Error(Errc::kParseError, "not a memory snapshot");
  }
  MemoryStore store;
  store.graph_hash_ = r.u64();
  if (store.graph_hash_ != graph.content_hash()) {
    throw Error(Errc::kGraphHashMismatch, "memory snapshot was taken against a different graph");
  }
  store.revision_ = r.u64();
  auto& c = store.config_;
  c.r_pos = r.f64();
  c.r_neg = r.f64();
  c.q_task = r.f64();
  c.q_time = r.f64();
  c.y_pos = r.f64();
  c.y_neg = r.f64();
  c.renormalize_state = r.u8() != 0;
  const auto count = r.u64();
  const auto dim = r.u64();
  if (count != graph.num_sentences() || (count > 0 && dim != graph.dim())) {
    throw Error(Errc::kStaleGraphBinding, "memory snapshot shape does not match the graph");
  }
  store.entries_.resize(count);
  for (auto& e : store.entries_) {
    e.m_task.resize(dim);
    e.m_time.resize(dim);
    for (double& x : e.m_task) x = r.f64();
    for (double& x : e.m_time) x = r.f64();
    e.pi_task = r.f64();
    e.pi_time = r.f64();
    e.update_count_task = r.u64();
    e.update_count_time = r.u64();
  }
  if (!r.done()) throw Error(Errc::kParseError, "trailing bytes in memory snapshot");
  return store;
}

std::vector<FeedbackRecord> apply_feedback(MemoryStore& store, const HierGraph& graph,
                                           const FeedbackQuery& query,
                                           const std::map<SentenceId, Label>& labels) {
  store.check_binding(graph);
  if (query.q.size() != graph.dim() || (query.q_time && query.q_time->size() != graph.dim())) {
    throw Error(Errc::kDimensionMismatch, "query embedding dimension differs from the graph's");
  }
  if (!is_unit(query.q) || (query.q_time && !is_unit(*query.q_time))) {
    throw Error(Errc::kInvalidArgument, "query directions must be unit norm");
  }
  for (const auto& [id, label] : labels) {
    if (id >= store.entries_.size()) {
      throw Error(Errc::kUnknownSentenceId, "sentence " + std::to_string(id));
    }
  }

  const UpdateConfig& cfg = store.config_;
  const std::uint64_t revision = store.revision_ + 1;
  std::vector<FeedbackRecord> records;
  records.reserve(labels.size() * 2);
  // Staged so that a failure part-way leaves the store untouched.
  std::vector<std::pair<SentenceId, SentenceMemory>> staged;
  staged.reserve(labels.size());

  for (const auto& [id, label] : labels) {
    SentenceMemory mem = store.entries_[id];
    const bool positive = label == Label::kSupportive;
    const double y = positive ? cfg.y_pos : cfg.y_neg;
    const double r = positive ? cfg.r_pos : cfg.r_neg;

    auto update_channel = [&](Channel ch, Vector& m, double& pi, std::uint64_t& count,
                              std::span<const double> dir, double q_noise) {
      FeedbackRecord rec{id, ch, y, 0.0, 0.0, pi, pi, revision};
      rec.residual = residual(y, dir, m);
      rec.gain = kalman_gain(pi, r);
      m = update_state(m, rec.gain, rec.residual, dir, cfg.renormalize_state);
      pi = update_perplexity(pi, rec.gain, q_noise);
      rec.pi_after = pi;
      ++count;
      records.push_back(rec);
    };

    update_channel(Channel::kTask, mem.m_task, mem.pi_task, mem.update_count_task, query.q,
                   cfg.q_task);
    if (query.q_time) {
      update_channel(Channel::kTime, mem.m_time, mem.pi_time, mem.update_count_time,
                     *query.q_time, cfg.q_time);
    } else {
      // Time channel disabled: gain forced to zero, state and perplexity kept.
      records.push_back({id, Channel::kTime, y, 0.0, 0.0, mem.pi_time, mem.pi_time, revision});
    }
    staged.emplace_back(id, std::move(mem));
  }
  for (auto& [id, mem] : staged) store.entries_[id] = std::move(mem);
  store.revision_ = revision;
  return records;
}

}  // namespace gamrag
