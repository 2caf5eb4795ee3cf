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

#include "commands.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gamrag/dynamics.hpp"
#include "gamrag/eval.hpp"
#include "gamrag/graph.hpp"
#include "gamrag/hash.hpp"
#include "gamrag/http_adapter.hpp"

namespace gamrag::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExitError{kExitInput, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write-then-rename so readers never observe a partial file.
void write_file(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ExitError{kExitFailure, "cannot write " + tmp.string()};
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ExitError{kExitFailure, "short write to " + tmp.string()};
  }
  fs::rename(tmp, path);
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ExitError{kExitInput, what + " is not valid JSON: " + e.what()};
  }
}

// Exclusive advisory lock on <path>.lock for the lifetime of the object.
class FileLock {
 public:
  explicit FileLock(const std::string& path) {
    const std::string lock_path = path + ".lock";
    fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw ExitError{kExitFailure, "cannot open lock file " + lock_path};
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw ExitError{kExitFailure, "cannot lock " + lock_path};
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw ExitError{kExitInput, std::string(flag) + " is required"};
  return value;
}

HierGraph load_graph(const RunConfig& c) {
  return HierGraph::deserialize(read_file(require(c.graph, "--graph")));
}

void check_embedder(const HierGraph& graph, const AdapterRegistry& reg) {
  if (graph.meta().embedder != reg.embedder->name()) {
    throw Error(Errc::kStaleGraphBinding, "graph was built with embedder " + graph.meta().embedder +
                                              " but the registry provides " + reg.embedder->name());
  }
}

MemoryStore load_memory(const RunConfig& c, const HierGraph& graph, const AdapterRegistry& reg) {
  // A named but missing snapshot starts fresh; the writing command creates it.
  if (c.memory.empty() || !fs::exists(c.memory)) {
    return MemoryStore::initialize(graph, *reg.embedder, c.update);
  }
  MemoryStore store = MemoryStore::restore(read_file(c.memory), graph);
  store.set_config(c.update);
  return store;
}

doubles::GoldTable dataset_gold(const RunConfig& c) {
  if (c.dataset.empty()) return {};
  return eval::gold_table(eval::read_dataset_jsonl(read_file(c.dataset)));
}

std::string inspect_csv(const HierGraph& graph, const MemoryStore& store) {
  std::ostringstream os;
  os << "revision,sentence_id,pi_task,pi_time,m_task_norm,m_task_cos\n";
  for (SentenceId i = 0; i < store.size(); ++i) {
    const SentenceMemory& m = store.at(i);
    os << store.revision() << ',' << i << ',' << fmt("%.12g", m.pi_task) << ','
       << fmt("%.12g", m.pi_time) << ',' << fmt("%.12g", norm(m.m_task)) << ','
       << fmt("%.12g", cosine(m.m_task, graph.sentences()[i].embedding)) << '\n';
  }
  return os.str();
}

json with_provenance(json artifact, const RunConfig& c) {
  artifact["config_hash"] = c.hash();
  return artifact;
}

// ---- subcommands ----

int cmd_index(const RunConfig& c) {
  const auto corpus = read_corpus_jsonl(read_file(require(c.corpus, "--corpus")));
  const auto reg = make_registry(c, c.dim, {});
  const HierGraph graph = build_graph(corpus, reg);
  const fs::path out = c.graph.empty() ? fs::path(c.out_dir) / "graph.gamgraph" : fs::path(c.graph);
  write_file(out, graph.serialize());
  std::cout << "passages=" << graph.num_passages() << " sentences=" << graph.num_sentences()
            << " entities=" << graph.num_entities() << " entity_sentence_edges=" << graph.m_es().nnz()
            << " sentence_passage_edges=" << graph.m_sp().nnz() << "\n";
  std::cerr << "wrote " << out.string() << " (hash " << hex64(graph.content_hash()) << ")\n";
  return kExitOk;
}

int cmd_query(const RunConfig& c, const std::string& question, const std::string& query_id,
              const std::string& episode_path) {
  const HierGraph graph = load_graph(c);
  const auto reg = make_registry(c, graph.dim(), dataset_gold(c));
  check_embedder(graph, reg);
  const MemoryStore store = load_memory(c, graph, reg);
  const QueryContext ctx = make_query_context(question, reg, query_id);
  const RetrievalEpisode ep = retrieve(graph, &store, ctx, c.retrieval, *reg.sufficiency_judge);

  const auto k = static_cast<std::size_t>(c.retrieval.k_passages);
  for (std::size_t i = 0; i < ep.ranking.size() && i < k; ++i) {
    const auto& r = ep.ranking[i];
    std::cout << (i + 1) << '\t' << graph.passages()[r.passage].id << '\t' << fmt("%.6f", r.score)
              << "\n";
  }
  const fs::path out = episode_path.empty() ? fs::path(c.out_dir) / "episode.json" : fs::path(episode_path);
  json j = with_provenance(episode_to_json(ep, graph, c.retrieval.k_passages, c.include_timing), c);
  j["memory_revision"] = store.revision();
  write_file(out, j.dump(2) + "\n");
  std::cerr << "query " << ep.query_id << ": " << ep.iteration_count() << " iteration(s), stop "
            << stop_reason_name(ep.stop) << "; trace " << out.string() << "\n";
  return kExitOk;
}

int cmd_feedback(const RunConfig& c, const std::string& episode_path, const std::string& labels_path) {
  const HierGraph graph = load_graph(c);
  const auto reg = make_registry(c, graph.dim(), {});
  check_embedder(graph, reg);
  const EpisodeHeader header =
      episode_header_from_json(parse_json(read_file(require(episode_path, "--episode")), "episode"));
  const json lj = parse_json(read_file(require(labels_path, "--labels")), "labels");

  std::map<SentenceId, Label> labels;
  try {
    const std::string qid = lj.at("query_id").get<std::string>();
    if (qid != header.query_id) {
      throw ExitError{kExitLabels, "labels are for query " + qid + " but the episode is " + header.query_id};
    }
    for (const auto& [key, value] : lj.at("labels").items()) {
      std::size_t used = 0;
      unsigned long sid = 0;
      try {
        sid = std::stoul(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != key.size()) throw ExitError{kExitLabels, "bad sentence id \"" + key + "\""};
      if (sid >= graph.num_sentences()) {
        throw Error(Errc::kUnknownSentenceId, "sentence " + key + " is not in the graph");
      }
      if (!std::binary_search(header.judged.begin(), header.judged.end(), static_cast<SentenceId>(sid))) {
        throw ExitError{kExitLabels, "sentence " + key + " was not judged in episode " + header.query_id};
      }
      const std::string v = value.get<std::string>();
      if (v == "supportive") {
        labels[static_cast<SentenceId>(sid)] = Label::kSupportive;
      } else if (v == "nonsupportive") {
        labels[static_cast<SentenceId>(sid)] = Label::kNonSupportive;
      } else {
        throw ExitError{kExitLabels, "label \"" + v + "\" must be supportive or nonsupportive"};
      }
    }
  } catch (const json::exception& e) {
    throw ExitError{kExitInput, std::string("labels: ") + e.what()};
  }

  const std::string out = !c.memory_out.empty() ? c.memory_out
                          : !c.memory.empty()   ? c.memory
                                                : (fs::path(c.out_dir) / "memory.gammem").string();
  FileLock lock(out);
  MemoryStore store = load_memory(c, graph, reg);
  const QueryContext ctx = make_query_context(header.query_text, reg, header.query_id);
  const auto records = apply_feedback(store, graph, ctx.feedback_query(), labels);
  std::cout << "sentence,channel,y,residual,gain,pi_before,pi_after\n";
  for (const auto& r : records) {
    std::cout << r.sentence << ',' << channel_name(r.channel) << ',' << fmt("%.6f", r.y) << ','
              << fmt("%.6f", r.residual) << ',' << fmt("%.6f", r.gain) << ','
              << fmt("%.6f", r.pi_before) << ',' << fmt("%.6f", r.pi_after) << "\n";
  }
  write_file(out, store.snapshot());
  std::cerr << "memory revision " << store.revision() << " written to " << out << "\n";
  return kExitOk;
}

int cmd_inspect(const RunConfig& c, const std::string& out_path) {
  const HierGraph graph = load_graph(c);
  const auto reg = make_registry(c, graph.dim(), {});
  check_embedder(graph, reg);
  const MemoryStore store = load_memory(c, graph, reg);
  const std::string csv = inspect_csv(graph, store);
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    write_file(out_path, csv);
  }
  return kExitOk;
}

struct EvalArgs {
  int turns = 1;
  int first_turn = 0;
  bool no_feedback = false;
  std::string scenario = "same";
  bool episodes = false;
};

int cmd_eval(const RunConfig& c, const EvalArgs& a) {
  const HierGraph graph = load_graph(c);
  const auto dataset = eval::read_dataset_jsonl(read_file(require(c.dataset, "--dataset")));

  // The rewriter is a pure double or remote function; rewritten questions
  // inherit the gold support of their source item.
  const auto probe = make_registry(c, graph.dim(), {});
  std::vector<eval::QaItem> exposure = dataset;
  std::vector<eval::QaItem> evaluation = dataset;
  if (a.scenario == "similar") {
    evaluation = eval::make_similar(dataset, *probe.rewriter);
  } else if (a.scenario == "different") {
    auto split = eval::split_by_type(dataset, c.seed);
    exposure = std::move(split.exposure);
    evaluation = std::move(split.evaluation);
  } else if (a.scenario != "same") {
    throw ExitError{kExitInput, "unknown scenario \"" + a.scenario + "\""};
  }
  std::vector<eval::QaItem> all = exposure;
  all.insert(all.end(), evaluation.begin(), evaluation.end());
  const auto reg = make_registry(c, graph.dim(), eval::gold_table(all));
  check_embedder(graph, reg);
  MemoryStore store = load_memory(c, graph, reg);

  const fs::path out_dir(c.out_dir);
  fs::create_directories(out_dir);
  std::ofstream episodes;
  if (a.episodes) episodes.open(out_dir / "episodes.jsonl", std::ios::trunc);

  eval::RunOptions opts;
  opts.turns = a.turns;
  opts.first_turn = a.first_turn;
  opts.feedback = !a.no_feedback;
  opts.on_turn_end = [&](int turn, const MemoryStore& s) {
    write_file(out_dir / ("memory_turn" + std::to_string(turn) + ".gammem"), s.snapshot());
    write_file(out_dir / ("inspect_turn" + std::to_string(turn) + ".csv"), inspect_csv(graph, s));
  };
  if (a.episodes) {
    opts.on_episode = [&](int, std::size_t, const RetrievalEpisode& ep) {
      episodes << episode_to_json(ep, graph, c.retrieval.k_passages, c.include_timing).dump() << "\n";
    };
  }

  const auto reports =
      a.scenario == "same"
          ? eval::run_memorization(dataset, graph, store, c.retrieval, reg, opts)
          : eval::run_transfer(exposure, evaluation, graph, store, c.retrieval, reg, opts);

  json report = {{"format", "gamreport/1"},
                 {"scenario", a.scenario},
                 {"graph_hash", hex64(graph.content_hash())},
                 {"feedback", !a.no_feedback},
                 {"run_config", c.to_json()},
                 {"reports", eval::reports_to_json(reports, c.include_timing)}};
  write_file(out_dir / "report.json", with_provenance(report, c).dump(2) + "\n");
  write_file(out_dir / "turns.csv", eval::reports_to_csv(reports, c.include_timing));
  write_file(out_dir / "run_config.json",
             with_provenance({{"run_config", c.to_json()}}, c).dump(2) + "\n");
  if (!c.memory_out.empty()) {
    FileLock lock(c.memory_out);
    write_file(c.memory_out, store.snapshot());
  }

  std::cout << "turn,contain_acc,token_f1,mean_iterations,failed_items\n";
  for (const auto& r : reports) {
    std::cout << r.turn << ',' << fmt("%.4f", r.contain_acc) << ',' << fmt("%.4f", r.token_f1) << ','
              << fmt("%.4f", r.mean_iterations) << ',' << r.failed_items << "\n";
  }
  return kExitOk;
}

struct SimArgs {
  dynamics::Scenario scenario{0.0, 1.0, 1.0, 0.01, 1.0, 20, 0.9};
  std::string out;
  bool sweep = false;
};

int cmd_simulate(const RunConfig& c, SimArgs a) {
  auto run_one = [&](const dynamics::Scenario& s, const fs::path& path) {
    const auto rows = dynamics::simulate_consistent_feedback(s);
    write_file(path, dynamics::to_csv(rows));
    const double kappa = dynamics::gain_floor(s.q_noise, s.r);
    std::cout << path.string() << ": r=" << fmt("%g", s.r) << " kappa=" << fmt("%.6f", kappa);
    if ((s.y == 1.0 || s.y == -1.0) && kappa > 0.0) {
      std::cout << " episodes_to_margin=" << dynamics::episodes_to_margin(s);
    }
    std::cout << "\n";
  };
  if (a.sweep) {
    for (double r : {0.25, 0.5, 1.0, 2.0}) {
      dynamics::Scenario s = a.scenario;
      s.r = r;
      run_one(s, fs::path(c.out_dir) / ("dynamics_r" + fmt("%g", r) + ".csv"));
    }
  } else {
    run_one(a.scenario, a.out.empty() ? fs::path(c.out_dir) / "dynamics.csv" : fs::path(a.out));
  }
  return kExitOk;
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kParseError:
    case Errc::kDuplicatePassageId:
    case Errc::kInvalidArgument:
    case Errc::kMissingQuestionType:
    case Errc::kEmptyGraph:
    case Errc::kInfeasibleScenario:
    case Errc::kDimensionMismatch:
      return kExitInput;
    case Errc::kAdapterFailure:
      return kExitAdapter;
    case Errc::kVersionMismatch:
    case Errc::kGraphHashMismatch:
    case Errc::kStaleGraphBinding:
      return kExitSnapshot;
    case Errc::kUnknownSentenceId:
      return kExitLabels;
    case Errc::kZeroVector:
    case Errc::kInvariantViolation:
      return kExitFailure;
  }
  return kExitFailure;
}

json RunConfig::to_json() const {
  const auto& r = retrieval;
  const auto& u = update;
  return {{"corpus", corpus},
          {"graph", graph},
          {"memory", memory},
          {"memory_out", memory_out},
          {"dataset", dataset},
          {"out_dir", out_dir},
          {"seed", seed},
          {"dim", dim},
          {"retrieval",
           {{"max_iterations", r.max_iterations},
            {"k_sentences", r.k_sentences},
            {"k_entities", r.k_entities},
            {"k_passages", r.k_passages},
            {"alpha", r.alpha},
            {"sem_floor", r.sem_floor}}},
          {"update",
           {{"r_pos", u.r_pos},
            {"r_neg", u.r_neg},
            {"q_task", u.q_task},
            {"q_time", u.q_time},
            {"y_pos", u.y_pos},
            {"y_neg", u.y_neg},
            {"renormalize_state", u.renormalize_state}}},
          {"adapters", adapters},
          {"http_functions", http_functions},
          {"sufficiency", sufficiency},
          {"include_timing", include_timing}};
}

std::string RunConfig::hash() const { return hex64(fnv1a(to_json().dump())); }

AdapterRegistry make_registry(const RunConfig& config, std::size_t dim,
                              const doubles::GoldTable& gold) {
  AdapterRegistry reg = doubles::make_registry(config.seed, dim, &gold);
  if (config.sufficiency == "yes" || config.sufficiency == "no") {
    reg.sufficiency_judge = std::make_shared<doubles::FixedSufficiencyJudge>(config.sufficiency == "yes");
  } else if (config.sufficiency != "oracle") {
    throw ExitError{kExitInput, "--sufficiency must be oracle, yes or no"};
  }
  std::set<std::string, std::less<>> fns;
  if (config.adapters == "http") {
    fns = http::function_names();
  } else if (config.adapters == "doubles") {
    fns.insert(config.http_functions.begin(), config.http_functions.end());
  } else {
    throw ExitError{kExitInput, "--adapters must be doubles or http"};
  }
  if (!fns.empty()) {
    auto client = std::make_shared<const http::Client>(http::ClientConfig::from_env());
    http::install(reg, client, fns, dim);
  }
  return reg;
}

int run(int argc, char** argv) {
  CLI::App app{"gamrag: memory-plastic graph retrieval"};
  app.set_config("--config", "", "key = value configuration file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  app.add_option("--corpus", c.corpus, "Corpus JSON-Lines {id, title?, text}");
  app.add_option("--graph", c.graph, "Graph snapshot path");
  app.add_option("--memory", c.memory, "Memory snapshot to read (fresh memories when absent)");
  app.add_option("--memory-out", c.memory_out, "Memory snapshot to write");
  app.add_option("--dataset", c.dataset, "QA JSON-Lines {question, answers, question_type?, gold_support_ids?}");
  app.add_option("--out-dir", c.out_dir, "Directory for outputs")->capture_default_str();
  app.add_option("--seed", c.seed, "Seed for doubles and scenario splits")->capture_default_str();
  app.add_option("--dim", c.dim, "Embedding dimension when indexing")->capture_default_str();
  app.add_option("--max-iterations", c.retrieval.max_iterations, "Retrieval iteration cap")->capture_default_str();
  app.add_option("--k-sentences", c.retrieval.k_sentences, "Sentences kept per iteration")->capture_default_str();
  app.add_option("--k-entities", c.retrieval.k_entities, "Entities reactivated per iteration")->capture_default_str();
  app.add_option("--k-passages", c.retrieval.k_passages, "Passages returned")->capture_default_str();
  app.add_option("--alpha", c.retrieval.alpha, "Weight of passage similarity in the score")->capture_default_str();
  app.add_option("--sem-floor", c.retrieval.sem_floor, "Lower clamp of the semantic weight")->capture_default_str();
  app.add_option("--r-pos", c.update.r_pos, "Observation noise for supportive feedback")->capture_default_str();
  app.add_option("--r-neg", c.update.r_neg, "Observation noise for non-supportive feedback")->capture_default_str();
  app.add_option("--q-task", c.update.q_task, "Process noise, task channel")->capture_default_str();
  app.add_option("--q-time", c.update.q_time, "Process noise, time channel")->capture_default_str();
  app.add_option("--y-pos", c.update.y_pos, "Target for supportive feedback")->capture_default_str();
  app.add_option("--y-neg", c.update.y_neg, "Target for non-supportive feedback")->capture_default_str();
  app.add_flag("--renormalize", c.update.renormalize_state, "Renormalize memory states after updates");
  app.add_option("--adapters", c.adapters, "doubles or http (GAM_ADAPTER_URL, GAM_ADAPTER_KEY, GAM_ADAPTER_TIMEOUT_MS)")
      ->capture_default_str();
  app.add_option("--http-functions", c.http_functions,
                 "Functions served over HTTP on top of the doubles: embed,segment,ner,time,"
                 "sufficiency,support,rewrite,generate,answer_judge")
      ->delimiter(',');
  app.add_option("--sufficiency", c.sufficiency, "Double sufficiency judge: oracle, yes or no")->capture_default_str();
  app.add_flag("--include-timing", c.include_timing, "Write wall-clock timings into traces and reports");

  auto* index = app.add_subcommand("index", "Build a graph snapshot from --corpus into --graph");

  std::string question, query_id, episode_out;
  auto* query = app.add_subcommand("query", "Retrieve passages for one question");
  query->add_option("question", question, "Question text")->required();
  query->add_option("--query-id", query_id, "Episode id (content hash when omitted)");
  query->add_option("--episode-out", episode_out, "Episode trace path (default <out-dir>/episode.json)");

  std::string episode_in, labels_in;
  auto* feedback = app.add_subcommand("feedback", "Apply judged labels of one episode to memory");
  feedback->add_option("--episode", episode_in, "Episode trace written by query")->required();
  feedback->add_option("--labels", labels_in,
                       "Labels JSON {\"query_id\": ..., \"labels\": {\"<sid>\": \"supportive\"|\"nonsupportive\"}}")
      ->required();

  EvalArgs ea;
  auto* evalc = app.add_subcommand("eval", "Multi-turn evaluation over --dataset");
  evalc->add_option("--turns", ea.turns,
                    "Number of turns; --turns N reports turns 0..N-1 (turn 0 runs on the starting memory)")
      ->capture_default_str();
  evalc->add_option("--first-turn", ea.first_turn, "Index of the first turn when resuming from --memory")
      ->capture_default_str();
  evalc->add_option("--scenario", ea.scenario, "same, similar or different")->capture_default_str();
  evalc->add_flag("--no-feedback", ea.no_feedback, "Read-only evaluation");
  evalc->add_flag("--episodes", ea.episodes, "Also write <out-dir>/episodes.jsonl");

  SimArgs sa;
  auto* sim = app.add_subcommand("simulate-dynamics", "Scalar gain/support trajectories as CSV");
  sim->add_option("--r", sa.scenario.r, "Observation noise")->capture_default_str();
  sim->add_option("--q", sa.scenario.q_noise, "Process noise")->capture_default_str();
  sim->add_option("--y", sa.scenario.y, "Target, one of -1, 0, 1")->capture_default_str();
  sim->add_option("--s0", sa.scenario.s0, "Initial projected support")->capture_default_str();
  sim->add_option("--pi0", sa.scenario.pi0, "Initial perplexity")->capture_default_str();
  sim->add_option("--n", sa.scenario.n, "Episodes")->capture_default_str();
  sim->add_option("--lambda", sa.scenario.lambda, "Margin for the episode bound")->capture_default_str();
  sim->add_option("--out", sa.out, "CSV path (default <out-dir>/dynamics.csv)");
  sim->add_flag("--sweep", sa.sweep, "Write dynamics_r{0.25,0.5,1,2}.csv under --out-dir");

  std::string inspect_out;
  auto* inspect = app.add_subcommand("inspect", "Per-sentence memory CSV");
  inspect->add_option("--out", inspect_out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }
  c.retrieval.validate();
  c.update.validate();

  if (*index) return cmd_index(c);
  if (*query) return cmd_query(c, question, query_id, episode_out);
  if (*feedback) return cmd_feedback(c, episode_in, labels_in);
  if (*evalc) return cmd_eval(c, ea);
  if (*sim) return cmd_simulate(c, sa);
  if (*inspect) return cmd_inspect(c, inspect_out);
  return kExitInput;
}

}  // namespace gamrag::cli
