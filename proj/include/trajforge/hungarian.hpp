// Copyright 2026 The trajforge Authors
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

#ifndef TRAJFORGE__HUNGARIAN_HPP_
#define TRAJFORGE__HUNGARIAN_HPP_

#include <cstddef>
#include <utility>
#include <vector>

namespace trajforge {

// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // sorted by row
  double total_cost = 0.0;
};

// Minimum-cost one-to-one assignment of min(rows, cols) pairs.
//
// Among all optimal matchings the one whose (row, col) pair list is
// lexicographically smallest is returned. The solver runs the
// shortest-augmenting-path Hungarian method on the zero-padded square matrix,
// then walks rows in order and, using only edges that are tight under the
// final dual potentials, moves each row to its smallest column that still
// admits a perfect tight matching of the remaining rows.
//
// Throws InputError if any entry is NaN or infinite.
Assignment hungarian(const CostMatrix& cost);

// Assignment restricted to pairs with allowed[r * cols + c] != 0. Excluded
// pairs receive a surrogate cost larger than any set of allowed pairs, so the
// number of allowed matches is maximized first; excluded pairs are dropped
// from the result.
Assignment hungarian_gated(CostMatrix cost, const std::vector<char>& allowed);

}  // namespace trajforge

#endif  // TRAJFORGE__HUNGARIAN_HPP_
