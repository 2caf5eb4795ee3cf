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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gamrag/error.hpp"

namespace gamrag {

using Vector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::kDimensionMismatch, "dot of vectors with different sizes");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Cosine similarity. Throws kZeroVector if either side has zero length.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error(Errc::kZeroVector, "cosine with a zero-length vector");
  return dot(a, b) / (na * nb);
}

inline Vector normalized(std::span<const double> a) {
  const double n = norm(a);
  if (n == 0.0) throw Error(Errc::kZeroVector, "cannot normalize a zero-length vector");
  Vector out(a.begin(), a.end());
  for (double& x : out) x /= n;
  return out;
}

inline bool is_unit(std::span<const double> a, double tol = 1e-6) {
  return std::abs(norm(a) - 1.0) <= tol;
}

}  // namespace gamrag
