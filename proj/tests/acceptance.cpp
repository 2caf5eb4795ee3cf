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

// Acceptance checks. One PASS/FAIL line per criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "gamrag/doubles.hpp"
#include "gamrag/dynamics.hpp"
#include "gamrag/eval.hpp"
#include "gamrag/linalg.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace gamrag;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    v.ok = false;
    v.detail += " (over the " + std::to_string(budget_s) + " s budget)";
  }
  if (!v.ok) ++failures;
  std::printf("%s [%d] %s: %s [%.3f s]\n", v.ok ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// 1: pi_10 = 1/11 and 1/21; 1 - pi_10 within 0.01 of 0.90 and 0.95.
Verdict perplexity_closed_form() {
  Verdict v;
  const double r_values[2] = {1.0, 0.5};
  const double expect_ratio[2] = {0.90, 0.95};
  for (int i = 0; i < 2; ++i) {
    dynamics::Scenario sc;
    sc.r = r_values[i];
    sc.q_noise = 0.0;
    sc.pi0 = 1.0;
    sc.n = 10;
    const double lab = dynamics::simulate_consistent_feedback(sc).back().pi;
    double engine = 1.0;
    for (int t = 0; t < 10; ++t) engine = update_perplexity(engine, kalman_gain(engine, sc.r), 0.0);
    const double closed = 1.0 / (10.0 / sc.r + 1.0);
    v.ok = v.ok && std::abs(lab - closed) <= 1e-12 && std::abs(engine - closed) <= 1e-12 &&
           std::abs((1.0 - closed) - expect_ratio[i]) <= 0.01;
    if (i > 0) v.detail += "; ";
    v.detail += fmt("r=%.2f pi_10=%.6f ratio=%.4f", sc.r, lab, 1.0 - lab);
  }
  return v;
}

// 2: per-step contraction to 1e-12, n-step bound whenever pi_t >= Q.
Verdict contraction_law() {
  SplitMix rng(2024);
  double worst_step = 0.0, worst_bound = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const double s = rng.uniform(-1.0, 1.0);
    double k = rng.unit();
    while (k == 0.0) k = rng.unit();
    const double y = static_cast<double>(rng.below(3)) - 1.0;
    const double next = dynamics::project_step(s, k, y);
    worst_step = std::max(worst_step, std::abs(std::abs(next - y) - (1.0 - k) * std::abs(s - y)));

    dynamics::Scenario sc;
    sc.s0 = s;
    sc.y = y;
    sc.r = rng.uniform(0.05, 3.0);
    sc.q_noise = rng.uniform(0.0, 0.3);
    sc.pi0 = rng.uniform(sc.q_noise, 1.0);
    sc.n = 1 + static_cast<int>(rng.below(50));
    const auto rows = dynamics::simulate_consistent_feedback(sc);
    const double kappa = dynamics::gain_floor(sc.q_noise, sc.r);
    bool above = true;
    for (const auto& row : rows) {
      if (!above) break;
      worst_bound = std::max(worst_bound, std::abs(row.s - y) - std::pow(1.0 - kappa, row.t) * std::abs(s - y));
      above = row.pi >= sc.q_noise;
    }
  }
  return {worst_step <= 1e-12 && worst_bound <= 1e-12,
          fmt("max step error %.3g, max bound excess %.3g over 1000 scenarios", worst_step, worst_bound)};
}

// 3: the worked example gives 4; simulated trajectories reach the margin in <= n.
Verdict episode_count() {
  const int example = dynamics::episodes_to_margin(1.0, 0.0, 0.9, 0.5);
  SplitMix rng(77);
  int reached = 0;
  for (int i = 0; i < 200; ++i) {
    dynamics::Scenario sc;
    sc.y = rng.below(2) == 0 ? 1.0 : -1.0;
    sc.s0 = rng.uniform(-1.0, 1.0);
    sc.lambda = rng.uniform(0.05, 0.95);
    sc.r = rng.uniform(0.1, 2.0);
    sc.q_noise = rng.uniform(0.005, 0.2);
    sc.pi0 = rng.uniform(sc.q_noise, 1.0);
    sc.n = dynamics::episodes_to_margin(sc);
    const auto rows = dynamics::simulate_consistent_feedback(sc);
    bool hit = false;
    for (const auto& row : rows) hit = hit || sc.y * row.s >= sc.lambda - 1e-12;
    reached += hit;
  }
  return {example == 4 && reached == 200,
          fmt("episodes_to_margin(+1, 0, 0.9, 0.5) = %.0f; %.0f/200 trajectories reach the margin", example, reached)};
}

// 4: sparse operators and propagation against dense references, 1e-9.
Verdict propagation_oracle() {
  SplitMix rng(404);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const HierGraph g = testing::random_graph(rng);
    Vector a(g.num_entities()), w(g.num_sentences());
    for (double& x : a) x = rng.below(3) == 0 ? 0.0 : rng.unit();
    for (double& x : w) x = rng.below(4) == 0 ? 0.0 : rng.unit();
    auto cmp = [&](const Vector& x, const Vector& y) {
      if (x.size() != y.size()) worst = INFINITY;
      for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    };
    cmp(ent_to_sent(g, a), testing::dense_ent_to_sent(g, a));
    cmp(sent_to_pass(g, w), testing::dense_sent_to_pass(g, w));
    cmp(sent_to_ent_avg(g, w), testing::dense_sent_to_ent_avg(g, w));

    const doubles::HashEmbedder emb(g.dim(), trial);
    MemoryStore store = MemoryStore::initialize(g, emb);
    testing::scramble_memory(rng, store, g, 10);
    const QueryContext q = testing::random_query(rng, g, trial % 2 == 0);
    cmp(propagate_iteration(g, &store, q, a), testing::dense_propagate(g, testing::dense_weights(g, &store, q, 0.0), a));
  }
  return {worst <= 1e-9, fmt("max abs deviation %.3g over 50 graphs", worst)};
}

// 5: orthogonal components kept, exact fixed points, L1 sums.
Verdict orthogonality_and_fixed_points() {
  SplitMix rng(505);
  double worst_orth = 0.0, worst_sum = 0.0;
  bool fixed = true;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 2 + rng.below(30);
    const Vector q = testing::random_unit(rng, dim);
    Vector m = testing::random_unit(rng, dim);
    for (double& x : m) x *= rng.uniform(0.5, 2.0);
    const double k = rng.unit(), e = rng.uniform(-2.0, 2.0);
    const Vector next = update_state(m, k, e, q, false);
    const double pm = dot(q, m), pn = dot(q, next);
    for (std::size_t j = 0; j < dim; ++j) {
      worst_orth = std::max(worst_orth, std::abs((next[j] - pn * q[j]) - (m[j] - pm * q[j])));
    }
    fixed = fixed && update_state(m, k, 0.0, q, false) == m && update_state(m, 0.0, e, q, false) == m;
  }
  for (int trial = 0; trial < 50; ++trial) {
    const HierGraph g = testing::random_graph(rng);
    const QueryContext q = testing::random_query(rng, g, false);
    Vector a(g.num_entities());
    for (double& x : a) x = rng.unit();
    const Vector s = propagate_iteration(g, nullptr, q, a);
    double sum = 0.0;
    for (double x : s) sum += x;
    if (sum != 0.0) worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  return {worst_orth <= 1e-12 && fixed && worst_sum <= 1e-9,
          fmt("orthogonal drift %.3g, L1 sum error %.3g, fixed points ", worst_orth, worst_sum) +
              (fixed ? "exact" : "BROKEN")};
}

// 6: accuracy up / iterations down over 5 memorization turns, >= 9 of 10 seeds.
Verdict memorization_trend() {
  int acc_ok = 0, iter_ok = 0;
  std::string trail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto c = testing::make_two_hop_corpus(seed, 20);
    const HierGraph g = build_graph(c.corpus, doubles::make_registry(seed));
    const auto items = testing::resolve_gold(c, g);
    const auto gold = eval::gold_table(items);
    const auto reg = doubles::make_registry(seed, 64, &gold);
    MemoryStore store = MemoryStore::initialize(g, *reg.embedder);
    eval::RunOptions o;
    o.turns = 6;
    const auto reps = eval::run_memorization(items, g, store, {}, reg, o);
    acc_ok += reps[5].contain_acc >= reps[0].contain_acc;
    iter_ok += reps[5].mean_iterations <= reps[0].mean_iterations;
    trail += fmt("%.2f->%.2f ", reps[0].mean_iterations, reps[5].mean_iterations);
  }
  return {acc_ok >= 9 && iter_ok >= 9,
          fmt("contain-acc held in %.0f/10, iterations held in %.0f/10; ", acc_ok, iter_ok) + "iterations " + trail};
}

// 7: all pi = 1 gives the memory-free ranking bit for bit.
Verdict gate_neutrality() {
  SplitMix rng(707);
  int compared = 0, equal = 0;
  const doubles::FixedSufficiencyJudge no(false);
  for (int trial = 0; trial < 50; ++trial) {
    const HierGraph g = testing::random_graph(rng);
    const doubles::HashEmbedder emb(g.dim(), trial);
    const MemoryStore store = MemoryStore::initialize(g, emb);
    for (int k = 0; k < 4; ++k) {
      const QueryContext q = testing::random_query(rng, g, k % 2 == 1);
      ++compared;
      equal += retrieve(g, &store, q, {}, no).ranking == retrieve(g, nullptr, q, {}, no).ranking;
    }
  }
  const auto c = testing::make_two_hop_corpus(3, 20);
  const auto reg = doubles::make_registry(3);
  const HierGraph g = build_graph(c.corpus, reg);
  const MemoryStore store = MemoryStore::initialize(g, *reg.embedder);
  for (const auto& pq : c.questions) {
    const QueryContext q = make_query_context(pq.question, reg);
    ++compared;
    equal += retrieve(g, &store, q, {}, no).ranking == retrieve(g, nullptr, q, {}, no).ranking;
  }
  return {equal == compared, fmt("%.0f/%.0f rankings identical", equal, compared)};
}

// 8: identical runs give identical bytes; a mid-run snapshot/restore is invisible.
Verdict determinism_and_persistence() {
  const auto c = testing::make_two_hop_corpus(8, 20);
  auto run = [&](int split_after, std::string& snapshot, std::string& traces, std::string& report) {
    const HierGraph g = build_graph(c.corpus, doubles::make_registry(8));
    const auto items = testing::resolve_gold(c, g);
    const auto gold = eval::gold_table(items);
    const auto reg = doubles::make_registry(8, 64, &gold);
    MemoryStore store = MemoryStore::initialize(g, *reg.embedder);
    eval::RunOptions o;
    o.on_episode = [&](int, std::size_t, const RetrievalEpisode& ep) {
      traces += episode_to_json(ep, g, 5).dump() + "\n";
    };
    std::vector<eval::TurnReport> reps;
    if (split_after > 0) {
      o.turns = split_after;
      reps = eval::run_memorization(items, g, store, {}, reg, o);
      MemoryStore restored = MemoryStore::restore(store.snapshot(), g);
      o.turns = 4 - split_after;
      o.first_turn = split_after;
      const auto rest = eval::run_memorization(items, g, restored, {}, reg, o);
      reps.insert(reps.end(), rest.begin(), rest.end());
      store = std::move(restored);
    } else {
      o.turns = 4;
      reps = eval::run_memorization(items, g, store, {}, reg, o);
    }
    snapshot = g.serialize() + store.snapshot();
    report = eval::reports_to_json(reps).dump() + eval::reports_to_csv(reps);
  };
  std::string s1, t1, r1, s2, t2, r2, s3, t3, r3;
  run(0, s1, t1, r1);
  run(0, s2, t2, r2);
  run(2, s3, t3, r3);
  const bool repeat = s1 == s2 && t1 == t2 && r1 == r2;
  const bool resume = s1 == s3 && t1 == t3 && r1 == r3;
  return {repeat && resume, std::string("repeat run ") + (repeat ? "identical" : "DIFFERS") +
                                ", snapshot/restore at turn 2 " + (resume ? "identical" : "DIFFERS")};
}

// 9: non-temporal episodes never touch the time channel.
Verdict no_time_isolation() {
  SplitMix rng(909);
  const HierGraph g = testing::random_graph(rng, {20, 60, 30, 16});
  const doubles::HashEmbedder emb(g.dim(), 9);
  MemoryStore store = MemoryStore::initialize(g, emb);
  const MemoryStore initial = store;
  std::size_t time_records = 0;
  for (int ep = 0; ep < 100; ++ep) {
    const QueryContext q = testing::random_query(rng, g, false);
    std::map<SentenceId, Label> labels;
    const std::size_t n = 1 + rng.below(6);
    for (std::size_t i = 0; i < n; ++i) {
      labels[static_cast<SentenceId>(rng.below(g.num_sentences()))] =
          rng.below(2) == 0 ? Label::kSupportive : Label::kNonSupportive;
    }
    for (const auto& rec : apply_feedback(store, g, q.feedback_query(), labels)) {
      if (rec.channel == Channel::kTime) {
        ++time_records;
        if (rec.gain != 0.0 || rec.pi_before != rec.pi_after) return {false, "time record moved"};
      }
    }
  }
  std::size_t touched_task = 0;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& now = store.at(static_cast<SentenceId>(i));
    const auto& then = initial.at(static_cast<SentenceId>(i));
    if (now.pi_time != then.pi_time || now.m_time != then.m_time) {
      return {false, "time memory of sentence " + std::to_string(i) + " changed"};
    }
    touched_task += now.m_task != then.m_task;
  }
  return {touched_task > 0, fmt("100 episodes, %.0f zero-gain time records, %.0f task memories moved, time memories untouched",
                                static_cast<double>(time_records), static_cast<double>(touched_task))};
}

}  // namespace

int main() {
  criterion(1, "perplexity closed form", 1.0, perplexity_closed_form);
  criterion(2, "contraction law", 1.0, contraction_law);
  criterion(3, "episode-count formula", 1.0, episode_count);
  criterion(4, "propagation oracle equivalence", 5.0, propagation_oracle);
  criterion(5, "orthogonality and fixed points", 5.0, orthogonality_and_fixed_points);
  criterion(6, "memorization trend", 60.0, memorization_trend);
  criterion(7, "gate neutrality at initialization", 10.0, gate_neutrality);
  criterion(8, "determinism and persistence", 30.0, determinism_and_persistence);
  criterion(9, "NO_TIME isolation", 5.0, no_time_isolation);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
