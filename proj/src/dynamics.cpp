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

#include "gamrag/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "gamrag/error.hpp"
#include "gamrag/memory.hpp"

namespace gamrag::dynamics {

void Scenario::validate() const {
  auto bad = [](const std::string& what) { throw Error(Errc::kInvalidArgument, what); };
  if (!(s0 >= -1.0 && s0 <= 1.0)) bad("s0 must lie in [-1, 1]");
  if (y != -1.0 && y != 0.0 && y != 1.0) bad("y must be -1, 0 or +1");
  if (!(r > 0.0)) bad("r must be positive");
  if (!(q_noise >= 0.0)) bad("q_noise must be non-negative");
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) bad("pi0 must lie in [0, 1]");
  if (n < 0) bad("n must be non-negative");
  if (!(lambda > 0.0 && lambda < 1.0)) bad("lambda must lie in (0, 1)");
}

double project_step(double s, double gain, double y) { return (1.0 - gain) * s + gain * y; }

double gain_floor(double q_noise, double r) { return q_noise / (q_noise + r); }

int episodes_to_margin(double y, double s0, double lambda, double kappa) {
  if (y != 1.0 && y != -1.0) {
    throw Error(Errc::kInfeasibleScenario, "margins are defined for targets +1 and -1 only");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error(Errc::kInvalidArgument, "lambda must lie in (0, 1)");
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw Error(Errc::kInvalidArgument, "kappa must lie in [0, 1]");

  // gap = 1 - y s0 is the distance to the target; the margin needs gap' <= 1 - lambda.
  const double gap = 1.0 - y * s0;
  const double budget = 1.0 - lambda;
  if (gap <= budget) return 0;
  if (kappa == 0.0) throw Error(Errc::kInfeasibleScenario, "zero gain floor never contracts");
  if (kappa == 1.0) return 1;

  const double ratio = budget / gap;
  int n = static_cast<int>(std::ceil(std::log(ratio) / std::log1p(-kappa)));
  if (n < 1) n = 1;
  // Settle rounding at the boundary against the inequality itself.
  while (n > 1 && std::pow(1.0 - kappa, n - 1) <= ratio) --n;
  while (std::pow(1.0 - kappa, n) > ratio) ++n;
  return n;
}

int episodes_to_margin(const Scenario& scenario) {
  scenario.validate();
  return episodes_to_margin(scenario.y, scenario.s0, scenario.lambda,
                            gain_floor(scenario.q_noise, scenario.r));
}

std::vector<TrajectoryRow> simulate_consistent_feedback(const Scenario& sc) {
  sc.validate();
  const double kappa = gain_floor(sc.q_noise, sc.r);
  std::vector<TrajectoryRow> rows;
  rows.reserve(static_cast<std::size_t>(sc.n) + 1);

  double pi = sc.pi0;
  double s = sc.s0;
  bool above_floor = true;
  for (int t = 0;; ++t) {
    const double gain = kalman_gain(pi, sc.r);
    rows.push_back({t, pi, gain, s});
    if (t == sc.n) break;
    above_floor = above_floor && pi >= sc.q_noise;
    const double next = project_step(s, gain, sc.y);
    const double lhs = std::abs(next - sc.y);
    const double rhs = (1.0 - gain) * std::abs(s - sc.y);
    if (std::abs(lhs - rhs) > 1e-12) {
      throw Error(Errc::kInvariantViolation, "per-step contraction broken at t=" + std::to_string(t));
    }
    s = next;
    pi = update_perplexity(pi, gain, sc.q_noise);
  }
  if (above_floor) {
    const double bound = std::pow(1.0 - kappa, sc.n) * std::abs(sc.s0 - sc.y);
    if (std::abs(s - sc.y) > bound + 1e-12) {
      throw Error(Errc::kInvariantViolation, "contraction bound violated after n episodes");
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  out << "t,pi,gain,s\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g\n", r.t, r.pi, r.gain, r.s);
    out << buf;
  }
}

std::string to_csv(const std::vector<TrajectoryRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace gamrag::dynamics
