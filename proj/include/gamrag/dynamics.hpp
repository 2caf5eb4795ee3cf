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

// Scalar laboratory for the projected-support dynamics of one memory channel
// under consistent feedback: s_{t+1} = (1 - K_t) s_t + K_t y, with the gain
// K_t = pi_t / (pi_t + R) and pi_{t+1} = clip01((1 - K_t) pi_t + Q).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gamrag::dynamics {

struct Scenario {
  double s0 = 0.0;       // initial projected support, [-1, 1]
  double y = 1.0;        // target, one of -1, 0, +1
  double r = 1.0;        // observation noise, > 0
  double q_noise = 0.0;  // process noise, >= 0
  double pi0 = 1.0;      // initial perplexity, [0, 1]
  int n = 10;            // episode count
  double lambda = 0.9;   // margin, (0, 1)

  void validate() const;
};

double project_step(double s, double gain, double y);

// Uniform lower bound on the gain while pi >= q_noise: Q / (Q + R).
double gain_floor(double q_noise, double r);

// Smallest n with (1 - kappa)^n <= (1 - lambda) / (1 - y s0), i.e. the number
// of consistent episodes after which s >= lambda (y = +1) or s <= -lambda
// (y = -1) is guaranteed. Throws kInfeasibleScenario when kappa = 0 and the
// margin is not already met, or when y is not +-1.
int episodes_to_margin(double y, double s0, double lambda, double kappa);
int episodes_to_margin(const Scenario& scenario);

struct TrajectoryRow {
  int t = 0;
  double pi = 0.0;
  double gain = 0.0;
  double s = 0.0;
};

// Rows t = 0..n: the state before episode t and the gain applied at it.
// Checks |s_n - y| <= (1 - kappa)^n |s_0 - y| (plus 1e-12) whenever pi_t >=
// q_noise held throughout, and the exact per-step contraction; throws
// kInvariantViolation otherwise.
std::vector<TrajectoryRow> simulate_consistent_feedback(const Scenario& scenario);

// Header `t,pi,gain,s`, 12 significant digits.
void write_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);
std::string to_csv(const std::vector<TrajectoryRow>& rows);

}  // namespace gamrag::dynamics
