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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gamrag/adapters.hpp"
#include "gamrag/incidence.hpp"

namespace gamrag {

inline constexpr std::string_view kGraphFormat = "gamgraph/1";

// A passage as read from the corpus file, before indexing.
struct RawPassage {
  std::string id;
  std::string title;
  std::string text;
};

struct Passage {
  std::string id;
  std::string title;
  std::string text;
  Vector embedding;
};

struct Sentence {
  SentenceId id = 0;
  PassageIndex passage = 0;
  std::string text;
  std::size_t begin = 0;  // byte offsets into the passage text
  std::size_t end = 0;
  Vector embedding;
  std::optional<std::string> time_expr;  // nullopt: no temporal constraint
};

struct EntityNode {
  EntityId id = 0;
  std::string surface;  // canonical form, unique across the graph
  Vector embedding;
  std::vector<SentenceId> sentences;  // sorted, non-empty
};

struct BuildMeta {
  std::string segmenter;
  std::string ner;
  std::string embedder;
  std::string time_extractor;
  std::size_t embedding_dim = 0;

  friend bool operator==(const BuildMeta&, const BuildMeta&) = default;
};

// Immutable entity/sentence/passage index. m_es is |E| x |S| (entity occurs
// in sentence), m_sp is |S| x |P| (sentence contained in passage). Safe for
// any number of concurrent readers.
class HierGraph {
 public:
  // Validates every structural invariant and derives both incidence matrices
  // from the node tables.
  HierGraph(BuildMeta meta, std::vector<Passage> passages, std::vector<Sentence> sentences,
            std::vector<EntityNode> entities);

  const BuildMeta& meta() const { return meta_; }
  std::size_t dim() const { return meta_.embedding_dim; }
  const std::vector<Passage>& passages() const { return passages_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::vector<EntityNode>& entities() const { return entities_; }
  const IncidenceMatrix& m_es() const { return m_es_; }
  const IncidenceMatrix& m_sp() const { return m_sp_; }

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_sentences() const { return sentences_.size(); }
  std::size_t num_passages() const { return passages_.size(); }

  std::optional<EntityId> find_entity(std::string_view canonical_surface) const;
  std::optional<PassageIndex> find_passage(std::string_view id) const;

  // FNV-1a of the snapshot bytes; memory snapshots bind to this value.
  std::uint64_t content_hash() const { return hash_; }

  std::string serialize() const;
  static HierGraph deserialize(std::string_view bytes);

 private:
  BuildMeta meta_;
  std::vector<Passage> passages_;
  std::vector<Sentence> sentences_;
  std::vector<EntityNode> entities_;
  IncidenceMatrix m_es_;
  IncidenceMatrix m_sp_;
  std::uint64_t hash_ = 0;
};

// Segment, extract entities, embed, and assemble the index. Entity nodes are
// merged by exact canonical surface and numbered in order of first
// occurrence. Throws kDuplicatePassageId, kInvalidArgument for an empty
// corpus or passage, and kAdapterFailure for adapter errors.
HierGraph build_graph(const std::vector<RawPassage>& corpus, const AdapterRegistry& adapters);

// u = M_ES^T a: entity activations pushed onto their sentences.
Vector ent_to_sent(const HierGraph& graph, std::span<const double> activation);

// bonus = M_SP^T w: sentence mass summed per passage.
Vector sent_to_pass(const HierGraph& graph, std::span<const double> sentence_scores);

// Mean of sentence scores over each entity's incident sentences.
Vector sent_to_ent_avg(const HierGraph& graph, std::span<const double> sentence_scores);

// JSON-Lines corpus: {"id": string, "title"?: string, "text": string}.
// Throws kParseError on malformed input or an empty corpus.
std::vector<RawPassage> read_corpus_jsonl(std::string_view content);

}  // namespace gamrag
