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

// Random fixtures and dense reference computations for property tests. The
// dense code works from the graph's node tables only, never from its sparse
// incidence matrices.

#include <cstdint>
#include <vector>

#include "gamrag/graph.hpp"
#include "gamrag/hash.hpp"
#include "gamrag/memory.hpp"
#include "gamrag/retrieval.hpp"

namespace gamrag::testing {

using Dense = std::vector<std::vector<double>>;

Vector random_unit(SplitMix& rng, std::size_t dim);

struct GraphLimits {
  std::size_t max_passages = 20;
  std::size_t max_sentences = 60;
  std::size_t max_entities = 30;
  std::size_t dim = 16;
};

// Every passage gets at least one sentence and every entity at least one
// mention; sizes are drawn uniformly up to the limits.
HierGraph random_graph(SplitMix& rng, const GraphLimits& limits = {});

// Query with random direction, 0..3 entities taken from the graph (embedding
// jittered), and an optional time direction.
QueryContext random_query(SplitMix& rng, const HierGraph& graph, bool with_time);

// Applies `episodes` random feedback episodes so that gates are non-trivial.
void scramble_memory(SplitMix& rng, MemoryStore& store, const HierGraph& graph, int episodes);

// |E| x |S| and |S| x |P| 0/1 matrices rebuilt from the node tables.
Dense dense_es(const HierGraph& graph);
Dense dense_sp(const HierGraph& graph);

Vector dense_ent_to_sent(const HierGraph& graph, const Vector& activation);
Vector dense_sent_to_pass(const HierGraph& graph, const Vector& sentence_scores);
Vector dense_sent_to_ent_avg(const HierGraph& graph, const Vector& sentence_scores);

// w_i = max(floor, cos(s_i, q)) (1 + (1 - pi_task) cos(m_task, q)) (1 + (1 - pi_time) cos(m_time, q_time)),
// the time factor only for temporal queries; null store means all factors 1.
Vector dense_weights(const HierGraph& graph, const MemoryStore* store, const QueryContext& q,
                     double sem_floor);

// Candidates are sentences with positive entity mass; raw = w * u; L1 normalized.
Vector dense_propagate(const HierGraph& graph, const Vector& weights, const Vector& activation);

double dense_cos(const Vector& a, const Vector& b);

}  // namespace gamrag::testing
