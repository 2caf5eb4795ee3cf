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

#include "gamrag/incidence.hpp"

#include <algorithm>
#include <string>

namespace gamrag {

IncidenceMatrix IncidenceMatrix::from_coordinates(std::size_t rows, std::size_t cols,
                                                  std::vector<Coord> coords) {
  std::sort(coords.begin(), coords.end());
  if (std::adjacent_find(coords.begin(), coords.end()) != coords.end()) {
    throw Error(Errc::kInvalidArgument, "duplicate incidence coordinate");
  }
  IncidenceMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(coords.size());
  for (const auto& [r, c] : coords) {
    if (r >= rows || c >= cols) {
      throw Error(Errc::kInvalidArgument, "incidence coordinate (" + std::to_string(r) + "," +
                                              std::to_string(c) + ") out of range");
    }
    ++m.row_ptr_[r + 1];
    m.col_idx_.push_back(c);
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

Vector IncidenceMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) {
    throw Error(Errc::kDimensionMismatch, "multiply expects " + std::to_string(cols_) +
                                              " entries, got " + std::to_string(x.size()));
  }
  Vector y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::uint32_t c : row(r)) acc += x[c];
    y[r] = acc;
  }
  return y;
}

Vector IncidenceMatrix::transpose_multiply(std::span<const double> x) const {
  if (x.size() != rows_) {
    throw Error(Errc::kDimensionMismatch, "transpose_multiply expects " + std::to_string(rows_) +
                                              " entries, got " + std::to_string(x.size()));
  }
  Vector y(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (x[r] == 0.0) continue;
    for (std::uint32_t c : row(r)) y[c] += x[r];
  }
  return y;
}

std::vector<IncidenceMatrix::Coord> IncidenceMatrix::coordinates() const {
  std::vector<Coord> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::uint32_t c : row(r)) out.emplace_back(static_cast<std::uint32_t>(r), c);
  }
  return out;
}

}  // namespace gamrag
