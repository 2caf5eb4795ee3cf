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

#include <gtest/gtest.h>

#include <cmath>

#include "gamrag/doubles.hpp"
#include "gamrag/memory.hpp"
#include "oracles.hpp"

namespace gamrag {
namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kInvariantViolation;
}

// Unit vector with cos(result, m) = c, built from m and a direction orthogonal to it.
Vector at_cosine(const Vector& m, double c, SplitMix& rng) {
  const Vector mu = normalized(m);
  Vector v = testing::random_unit(rng, m.size());
  const double proj = dot(v, mu);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * mu[i];
  v = normalized(v);
  Vector out(m.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * mu[i] + std::sqrt(1.0 - c * c) * v[i];
  return out;
}

class MemoryFixture : public ::testing::Test {
 protected:
  MemoryFixture()
      : reg_(doubles::make_registry()),
        graph_(build_graph({{"P1", "", "Ada Byron won in 1999. Ada Byron wrote notes."},
                            {"P2", "", "Charles Babbage met Ada Byron."}},
                           reg_)) {}
  AdapterRegistry reg_;
  HierGraph graph_;
};

TEST_F(MemoryFixture, InitialState) {
  const auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  ASSERT_EQ(store.size(), 3u);
  EXPECT_EQ(store.revision(), 0u);
  for (SentenceId i = 0; i < store.size(); ++i) {
    const auto& m = store.at(i);
    EXPECT_EQ(m.pi_task, 1.0);
    EXPECT_EQ(m.pi_time, 1.0);
    EXPECT_EQ(m.update_count_task, 0u);
    EXPECT_EQ(m.m_task, graph_.sentences()[i].embedding);
  }
  EXPECT_EQ(graph_.sentences()[0].time_expr, std::optional<std::string>("1999"));
  EXPECT_EQ(store.at(0).m_time, reg_.embedder->embed("1999"));
  EXPECT_EQ(store.at(1).m_time, reg_.embedder->embed(kNoTimeSentinel));
}

TEST(MemoryFormulas, Residual) {
  const Vector q{1.0, 0.0};
  EXPECT_DOUBLE_EQ(residual(1.0, q, Vector{1.0, 0.0}), 0.0);
  // cos = 0.3 from a non-unit m: the residual uses the cosine, not the raw dot.
  const Vector m{0.6, 0.6 * std::sqrt(1.0 / 0.09 - 1.0)};
  EXPECT_NEAR(residual(1.0, q, m), 0.7, 1e-12);
  EXPECT_NEAR(residual(0.0, q, m), -0.3, 1e-12);
  EXPECT_EQ(code_of([&] { residual(1.0, q, Vector{0.0, 0.0}); }), Errc::kZeroVector);
  EXPECT_EQ(code_of([&] { residual(1.0, Vector{2.0, 0.0}, q); }), Errc::kInvalidArgument);
}

TEST(MemoryFormulas, Gain) {
  EXPECT_DOUBLE_EQ(kalman_gain(1.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(kalman_gain(1.0, 0.5), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(kalman_gain(0.0, 0.5), 0.0);
  SplitMix rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double pi = rng.unit();
    const double r = 0.01 + rng.unit() * 3.0;
    const double q = rng.unit() * 0.1;
    const double k = kalman_gain(pi, r);
    EXPECT_GE(k, 0.0);
    EXPECT_LT(k, 1.0);
    EXPECT_LE(k, kalman_gain(std::min(1.0, pi + 0.01), r));
    EXPECT_GE(k, kalman_gain(pi, r + 0.01));
    if (pi >= q) {
      EXPECT_GE(k, q / (q + r) - 1e-15);
    }
  }
}

TEST(MemoryFormulas, UpdateStateHandExample) {
  const Vector q{1.0, 0.0};
  const Vector m{0.0, 1.0};
  const double e = residual(1.0, q, m);
  EXPECT_DOUBLE_EQ(e, 1.0);
  const Vector m2 = update_state(m, 0.5, e, q, false);
  EXPECT_EQ(m2, (Vector{0.5, 1.0}));
  EXPECT_EQ(update_state(m, 0.0, e, q, false), m);
  EXPECT_EQ(update_state(q, 0.7, residual(1.0, q, q), q, false), q);
  EXPECT_TRUE(is_unit(update_state(m, 0.5, e, q, true)));
}

TEST(MemoryFormulas, Perplexity) {
  EXPECT_DOUBLE_EQ(update_perplexity(1.0, 0.5, 0.0), 0.5);
  EXPECT_EQ(update_perplexity(0.9, 0.0, 5.0), 1.0);
  EXPECT_EQ(update_perplexity(0.0, 1.0, 0.0), 0.0);
  for (double r : {1.0, 0.5}) {
    double pi = 1.0;
    for (int t = 1; t <= 10; ++t) {
      pi = update_perplexity(pi, kalman_gain(pi, r), 0.0);
      // pi_t = 1/(t+1) for r = 1 and 1/(2t+1) for r = 0.5
      EXPECT_NEAR(pi, 1.0 / (t / r + 1.0), 1e-12);
    }
  }
  double pi = 1.0;
  for (int t = 0; t < 10000; ++t) pi = update_perplexity(pi, kalman_gain(pi, 0.5), 1e-6);
  EXPECT_GT(pi, 0.0);
}

TEST(MemoryFormulas, ProjectedRecursionAndContraction) {
  SplitMix rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const Vector q = testing::random_unit(rng, 12);
    const Vector m = testing::random_unit(rng, 12);
    const double y = static_cast<double>(rng.below(3)) - 1.0;
    const double k = rng.unit();
    const double s = dot(q, m);
    const Vector m2 = update_state(m, k, residual(y, q, m), q, false);
    EXPECT_NEAR(dot(q, m2), (1.0 - k) * s + k * y, 1e-12);
    EXPECT_NEAR(std::abs(dot(q, m2) - y), (1.0 - k) * std::abs(s - y), 1e-12);
    // Orthogonal complement untouched.
    Vector v = testing::random_unit(rng, 12);
    const double pv = dot(v, q);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= pv * q[i];
    Vector diff(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) diff[i] = m2[i] - m[i];
    EXPECT_NEAR(dot(diff, v), 0.0, 1e-12);
  }
}

TEST_F(MemoryFixture, SupportiveHandChain) {
  auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  SplitMix rng(2);
  const Vector m0 = store.at(1).m_task;
  const Vector q = at_cosine(m0, 0.2, rng);
  const auto recs = apply_feedback(store, graph_, {q, std::nullopt}, {{1, Label::kSupportive}});
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].channel, Channel::kTask);
  EXPECT_NEAR(recs[0].gain, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(recs[0].residual, 0.8, 1e-12);
  EXPECT_NEAR(recs[0].pi_after, 1.0 / 3.0 + 0.01, 1e-12);
  EXPECT_EQ(recs[0].applied_at_revision, 1u);
  const Vector& m1 = store.at(1).m_task;
  for (std::size_t i = 0; i < m0.size(); ++i) EXPECT_NEAR(m1[i], m0[i] + (2.0 / 3.0) * 0.8 * q[i], 1e-12);

  // NO_TIME query: time record present with zero gain and pi untouched.
  EXPECT_EQ(recs[1].channel, Channel::kTime);
  EXPECT_EQ(recs[1].gain, 0.0);
  EXPECT_EQ(recs[1].pi_after, recs[1].pi_before);
  EXPECT_EQ(store.at(1).pi_time, 1.0);
  EXPECT_EQ(store.at(1).update_count_time, 0u);
  EXPECT_EQ(store.at(1).update_count_task, 1u);
}

TEST_F(MemoryFixture, NonSupportiveIsDamped) {
  auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  SplitMix rng(2);
  const Vector q = at_cosine(store.at(1).m_task, 0.2, rng);
  const auto recs = apply_feedback(store, graph_, {q, std::nullopt}, {{1, Label::kNonSupportive}});
  EXPECT_DOUBLE_EQ(recs[0].gain, 0.5);
  EXPECT_NEAR(recs[0].residual, -0.2, 1e-12);
  EXPECT_EQ(recs[0].y, 0.0);
}

TEST_F(MemoryFixture, TemporalQueryUpdatesBothChannels) {
  auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  const Vector q = reg_.embedder->embed("When did Ada Byron win?");
  const Vector qt = reg_.embedder->embed("1999");
  const auto recs =
      apply_feedback(store, graph_, {q, qt}, {{0, Label::kSupportive}, {2, Label::kNonSupportive}});
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[0].sentence, 0u);
  EXPECT_EQ(recs[2].sentence, 2u);
  EXPECT_EQ(recs[1].channel, Channel::kTime);
  EXPECT_NEAR(recs[1].gain, 2.0 / 3.0, 1e-15);
  // m_time of sentence 0 is Enc("1999"), aligned with q_time already.
  EXPECT_NEAR(recs[1].residual, 0.0, 1e-12);
  EXPECT_LT(store.at(0).pi_time, 1.0);
  // Sentence 2 has no time expression; its sentinel memory is updated like any other.
  EXPECT_EQ(recs[3].channel, Channel::kTime);
  EXPECT_DOUBLE_EQ(recs[3].gain, 0.5);
  EXPECT_LT(store.at(2).pi_time, 1.0);
  EXPECT_EQ(store.at(1), MemoryStore::initialize(graph_, *reg_.embedder).at(1));
}

TEST_F(MemoryFixture, RevisionAndEmptyLabels) {
  auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  const auto before = store;
  const Vector q = reg_.embedder->embed("anything");
  EXPECT_TRUE(apply_feedback(store, graph_, {q, std::nullopt}, {}).empty());
  EXPECT_EQ(store.revision(), 1u);
  EXPECT_EQ(store.entries(), before.entries());
  apply_feedback(store, graph_, {q, std::nullopt}, {{0, Label::kSupportive}});
  EXPECT_EQ(store.revision(), 2u);
}

TEST_F(MemoryFixture, UnknownSentenceLeavesStoreUntouched) {
  auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  const auto before = store;
  const Vector q = reg_.embedder->embed("anything");
  EXPECT_EQ(code_of([&] {
              apply_feedback(store, graph_, {q, std::nullopt}, {{0, Label::kSupportive}, {9, Label::kSupportive}});
            }),
            Errc::kUnknownSentenceId);
  EXPECT_EQ(store, before);
}

TEST_F(MemoryFixture, PerplexityStaysInRangeUnderFuzz) {
  auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  SplitMix rng(99);
  testing::scramble_memory(rng, store, graph_, 300);
  for (const auto& m : store.entries()) {
    EXPECT_GE(m.pi_task, 0.0);
    EXPECT_LE(m.pi_task, 1.0);
    EXPECT_GE(m.pi_time, 0.0);
    EXPECT_LE(m.pi_time, 1.0);
    for (double x : m.m_task) EXPECT_TRUE(std::isfinite(x));
  }
  EXPECT_EQ(store.revision(), 300u);
}

TEST_F(MemoryFixture, SnapshotRoundTrip) {
  auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  EXPECT_EQ(MemoryStore::restore(store.snapshot(), graph_), store);
  SplitMix rng(4);
  testing::scramble_memory(rng, store, graph_, 3);
  const std::string bytes = store.snapshot();
  const MemoryStore back = MemoryStore::restore(bytes, graph_);
  EXPECT_EQ(back, store);
  EXPECT_EQ(back.snapshot(), bytes);
  EXPECT_EQ(bytes.substr(0, kMemoryFormat.size()), kMemoryFormat);
}

TEST_F(MemoryFixture, SnapshotGuards) {
  const auto store = MemoryStore::initialize(graph_, *reg_.embedder);
  const std::string bytes = store.snapshot();
  const HierGraph other = build_graph({{"X", "", "Some Other Text."}}, reg_);
  EXPECT_EQ(code_of([&] { MemoryStore::restore(bytes, other); }), Errc::kGraphHashMismatch);
  std::string v2 = bytes;
  v2[kMemoryFormat.size() - 1] = '9';
  EXPECT_EQ(code_of([&] { MemoryStore::restore(v2, graph_); }), Errc::kVersionMismatch);
  EXPECT_EQ(code_of([&] { MemoryStore::restore(bytes.substr(0, bytes.size() - 1), graph_); }),
            Errc::kParseError);
  EXPECT_EQ(code_of([&] { store.check_binding(other); }), Errc::kStaleGraphBinding);
}

TEST(UpdateConfigTest, Validation) {
  UpdateConfig c;
  EXPECT_NO_THROW(c.validate());
  c.r_neg = 0.1;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.q_task = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.r_pos = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

}  // namespace
}  // namespace gamrag
