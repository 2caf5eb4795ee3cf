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

#include "gamrag/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gamrag/binio.hpp"
#include "gamrag/hash.hpp"
#include "gamrag/text.hpp"
#include "json.hpp"

namespace gamrag {
namespace {

void check_embedding(const Vector& v, std::size_t dim, const std::string& what) {
  if (v.size() != dim) {
    throw Error(Errc::kDimensionMismatch, what + " embedding has dimension " +
                                              std::to_string(v.size()) + ", expected " +
                                              std::to_string(dim));
  }
  if (!is_unit(v)) throw Error(Errc::kInvalidArgument, what + " embedding is not unit norm");
}

Vector embed_checked(const Embedder& embedder, std::string_view text) {
  Vector v = call_adapter("embedder", [&] { return embedder.embed(text); });
  if (v.size() != embedder.dim()) {
    throw Error(Errc::kAdapterFailure, "embedder returned a vector of the wrong dimension");
  }
  if (!is_unit(v)) throw Error(Errc::kAdapterFailure, "embedder returned a non-unit vector");
  return v;
}

void write_coords(binio::Writer& w, const IncidenceMatrix& m) {
  w.u64(m.rows());
  w.u64(m.cols());
  const auto coords = m.coordinates();
  w.u64(coords.size());
  for (const auto& [r, c] : coords) {
    w.u32(r);
    w.u32(c);
  }
}

IncidenceMatrix read_coords(binio::Reader& r) {
  const auto rows = r.u64();
  const auto cols = r.u64();
  const auto n = r.u64();
  std::vector<IncidenceMatrix::Coord> coords;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto row = r.u32();
    const auto col = r.u32();
    coords.emplace_back(row, col);
  }
  return IncidenceMatrix::from_coordinates(rows, cols, std::move(coords));
}

}  // namespace

HierGraph::HierGraph(BuildMeta meta, std::vector<Passage> passages,
                     std::vector<Sentence> sentences, std::vector<EntityNode> entities)
    : meta_(std::move(meta)),
      passages_(std::move(passages)),
      sentences_(std::move(sentences)),
      entities_(std::move(entities)) {
  const std::size_t d = meta_.embedding_dim;
  if (passages_.empty()) throw Error(Errc::kInvalidArgument, "graph has no passages");

  std::set<std::string_view> ids;
  for (const auto& p : passages_) {
    if (p.text.empty()) throw Error(Errc::kInvalidArgument, "passage " + p.id + " has empty text");
    if (!ids.insert(p.id).second) throw Error(Errc::kDuplicatePassageId, p.id);
    check_embedding(p.embedding, d, "passage " + p.id);
  }

  std::vector<IncidenceMatrix::Coord> sp;
  sp.reserve(sentences_.size());
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    const auto& s = sentences_[i];
    if (s.id != i) throw Error(Errc::kInvalidArgument, "sentence ids must be dense");
    if (s.passage >= passages_.size()) {
      throw Error(Errc::kInvalidArgument, "sentence " + std::to_string(i) + " has no passage");
    }
    const auto& text = passages_[s.passage].text;
    if (s.begin >= s.end || s.end > text.size()) {
      throw Error(Errc::kInvalidArgument, "sentence " + std::to_string(i) + " span out of bounds");
    }
    check_embedding(s.embedding, d, "sentence " + std::to_string(i));
    sp.emplace_back(s.id, s.passage);
  }

  std::set<std::string_view> surfaces;
  std::vector<IncidenceMatrix::Coord> es;
  for (std::size_t j = 0; j < entities_.size(); ++j) {
    const auto& e = entities_[j];
    if (e.id != j) throw Error(Errc::kInvalidArgument, "entity ids must be dense");
    if (!surfaces.insert(e.surface).second) {
      throw Error(Errc::kInvalidArgument, "duplicate entity surface '" + e.surface + "'");
    }
    if (e.sentences.empty()) {
      throw Error(Errc::kInvalidArgument, "entity '" + e.surface + "' has no sentences");
    }
    if (!std::is_sorted(e.sentences.begin(), e.sentences.end())) {
      throw Error(Errc::kInvalidArgument, "entity sentence list must be sorted");
    }
    check_embedding(e.embedding, d, "entity '" + e.surface + "'");
    for (SentenceId s : e.sentences) {
      if (s >= sentences_.size()) throw Error(Errc::kInvalidArgument, "entity sentence out of range");
      es.emplace_back(e.id, s);
    }
  }

  m_es_ = IncidenceMatrix::from_coordinates(entities_.size(), sentences_.size(), std::move(es));
  m_sp_ = IncidenceMatrix::from_coordinates(sentences_.size(), passages_.size(), std::move(sp));
  hash_ = fnv1a(serialize());
}

std::optional<EntityId> HierGraph::find_entity(std::string_view canonical_surface) const {
  for (const auto& e : entities_) {
    if (e.surface == canonical_surface) return e.id;
  }
  return std::nullopt;
}

std::optional<PassageIndex> HierGraph::find_passage(std::string_view id) const {
  for (std::size_t i = 0; i < passages_.size(); ++i) {
    if (passages_[i].id == id) return static_cast<PassageIndex>(i);
  }
  return std::nullopt;
}

std::string HierGraph::serialize() const {
  binio::Writer w;
  w.magic(kGraphFormat);
  w.magic("\n");
  w.str(meta_.segmenter);
  w.str(meta_.ner);
  w.str(meta_.embedder);
  w.str(meta_.time_extractor);
  w.u64(meta_.embedding_dim);

  w.u64(passages_.size());
  for (const auto& p : passages_) {
    w.str(p.id);
    w.str(p.title);
    w.str(p.text);
    w.f64s(p.embedding);
  }
  w.u64(sentences_.size());
  for (const auto& s : sentences_) {
    w.u32(s.passage);
    w.u64(s.begin);
    w.u64(s.end);
    w.str(s.text);
    w.u8(s.time_expr.has_value() ? 1 : 0);
    w.str(s.time_expr.value_or(""));
    w.f64s(s.embedding);
  }
  w.u64(entities_.size());
  for (const auto& e : entities_) {
    w.str(e.surface);
    w.f64s(e.embedding);
    w.u64(e.sentences.size());
    for (SentenceId s : e.sentences) w.u32(s);
  }
  write_coords(w, m_es_);
  write_coords(w, m_sp_);
  return std::move(w).bytes();
}

HierGraph HierGraph::deserialize(std::string_view bytes) {
  binio::Reader r(bytes);
  if (!r.magic(kGraphFormat)) {
    if (bytes.substr(0, 9) == "gamgraph/") {
      throw Error(Errc::kVersionMismatch, "unsupported graph snapshot version");
    }
    throw Error(Errc::kParseError, "not a graph snapshot");
  }
  if (!r.magic("\n")) throw Error(Errc::kVersionMismatch, "unsupported graph snapshot version");

  BuildMeta meta;
  meta.segmenter = r.str();
  meta.ner = r.str();
  meta.embedder = r.str();
  meta.time_extractor = r.str();
  meta.embedding_dim = r.u64();

  std::vector<Passage> passages(r.u64());
  for (auto& p : passages) {
    p.id = r.str();
    p.title = r.str();
    p.text = r.str();
    p.embedding = r.f64s();
  }
  std::vector<Sentence> sentences(r.u64());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto& s = sentences[i];
    s.id = static_cast<SentenceId>(i);
    s.passage = r.u32();
    s.begin = r.u64();
    s.end = r.u64();
    s.text = r.str();
    const bool has_time = r.u8() != 0;
    std::string time = r.str();
    if (has_time) s.time_expr = std::move(time);
    s.embedding = r.f64s();
  }
  std::vector<EntityNode> entities(r.u64());
  for (std::size_t j = 0; j < entities.size(); ++j) {
    auto& e = entities[j];
    e.id = static_cast<EntityId>(j);
    e.surface = r.str();
    e.embedding = r.f64s();
    e.sentences.resize(r.u64());
    for (auto& s : e.sentences) s = r.u32();
  }
  IncidenceMatrix m_es = read_coords(r);
  IncidenceMatrix m_sp = read_coords(r);
  if (!r.done()) throw Error(Errc::kParseError, "trailing bytes in graph snapshot");

  HierGraph g(std::move(meta), std::move(passages), std::move(sentences), std::move(entities));
  if (!(g.m_es_ == m_es) || !(g.m_sp_ == m_sp)) {
    throw Error(Errc::kParseError, "stored incidence matrices disagree with node tables");
  }
  return g;
}

HierGraph build_graph(const std::vector<RawPassage>& corpus, const AdapterRegistry& adapters) {
  if (corpus.empty()) throw Error(Errc::kInvalidArgument, "corpus is empty");
  if (!adapters.embedder || !adapters.segmenter || !adapters.ner || !adapters.time_extractor) {
    throw Error(Errc::kInvalidArgument, "indexing needs embedder, segmenter, ner and time extractor");
  }
  const Embedder& embedder = *adapters.embedder;

  std::set<std::string_view> ids;
  for (const auto& p : corpus) {
    if (!ids.insert(p.id).second) throw Error(Errc::kDuplicatePassageId, p.id);
  }

  BuildMeta meta{adapters.segmenter->name(), adapters.ner->name(), embedder.name(),
                 adapters.time_extractor->name(), embedder.dim()};

  std::vector<Passage> passages;
  std::vector<Sentence> sentences;
  std::vector<EntityNode> entities;
  std::map<std::string, EntityId, std::less<>> by_surface;

  for (std::size_t pi = 0; pi < corpus.size(); ++pi) {
    const auto& raw = corpus[pi];
    if (raw.text.empty()) throw Error(Errc::kInvalidArgument, "passage " + raw.id + " has empty text");
    passages.push_back({raw.id, raw.title, raw.text, embed_checked(embedder, raw.text)});

    for (auto& span : segment_passage(raw.text, *adapters.segmenter)) {
      Sentence s;
      s.id = static_cast<SentenceId>(sentences.size());
      s.passage = static_cast<PassageIndex>(pi);
      s.begin = span.begin;
      s.end = span.end;
      s.text = std::move(span.text);
      s.embedding = embed_checked(embedder, s.text);
      s.time_expr = call_adapter("time extractor",
                                 [&] { return adapters.time_extractor->extract(s.text); });
      if (s.time_expr && s.time_expr->empty()) s.time_expr.reset();

      for (auto& surface : extract_entities(s.text, *adapters.ner)) {
        auto it = by_surface.find(surface);
        if (it == by_surface.end()) {
          const auto id = static_cast<EntityId>(entities.size());
          Vector emb = embed_checked(embedder, surface);
          entities.push_back({id, surface, std::move(emb), {}});
          it = by_surface.emplace(std::move(surface), id).first;
        }
        entities[it->second].sentences.push_back(s.id);
      }
      sentences.push_back(std::move(s));
    }
  }
  return HierGraph(std::move(meta), std::move(passages), std::move(sentences),
                   std::move(entities));
}

Vector ent_to_sent(const HierGraph& graph, std::span<const double> activation) {
  return graph.m_es().transpose_multiply(activation);
}

Vector sent_to_pass(const HierGraph& graph, std::span<const double> sentence_scores) {
  return graph.m_sp().transpose_multiply(sentence_scores);
}

Vector sent_to_ent_avg(const HierGraph& graph, std::span<const double> sentence_scores) {
  const auto& m = graph.m_es();
  Vector out = m.multiply(sentence_scores);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] /= static_cast<double>(m.row_nnz(j));
  return out;
}

std::vector<RawPassage> read_corpus_jsonl(std::string_view content) {
  std::vector<RawPassage> out;
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
      RawPassage p;
      p.id = j.at("id").get<std::string>();
      p.text = j.at("text").get<std::string>();
      if (j.contains("title") && !j.at("title").is_null()) p.title = j.at("title").get<std::string>();
      if (p.text.empty()) throw Error(Errc::kParseError, "empty text");
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParseError, "corpus line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(Errc::kParseError, "corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) throw Error(Errc::kParseError, "corpus is empty");
  return out;
}

}  // namespace gamrag
