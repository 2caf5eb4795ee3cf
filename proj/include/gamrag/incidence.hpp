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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gamrag/linalg.hpp"

namespace gamrag {

// Binary sparse matrix in CSR form. Every stored coordinate is an implicit 1.
class IncidenceMatrix {
 public:
  using Coord = std::pair<std::uint32_t, std::uint32_t>;

  IncidenceMatrix() = default;

  // Throws kInvalidArgument on out-of-range or duplicate coordinates.
  static IncidenceMatrix from_coordinates(std::size_t rows, std::size_t cols,
                                          std::vector<Coord> coords);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  // Column indices of row r, ascending.
  std::span<const std::uint32_t> row(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], col_idx_.data() + row_ptr_[r + 1]};
  }
  std::size_t row_nnz(std::size_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }

  // y = M x, with dim(x) = cols.
  Vector multiply(std::span<const double> x) const;
  // y = M^T x, with dim(x) = rows.
  Vector transpose_multiply(std::span<const double> x) const;

  // Row-major coordinate list.
  std::vector<Coord> coordinates() const;

  friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
};

}  // namespace gamrag
