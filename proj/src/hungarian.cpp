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

#include "trajforge/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "trajforge/errors.hpp"

namespace trajforge {

CostMatrix::CostMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ragged cost matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

namespace {

struct Solved {
  std::vector<std::size_t> row_to_col;
  std::vector<double> u;
  std::vector<double> v;
};

// Shortest augmenting path Hungarian method on a square matrix (0-indexed
// interface, 1-indexed internals). Keeps u[i] + v[j] <= a(i, j) with equality
// on matched pairs.
Solved solve_square(const std::vector<double>& a, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Solved s;
  s.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) s.row_to_col[p[j] - 1] = j - 1;
  s.u.assign(u.begin() + 1, u.end());
  s.v.assign(v.begin() + 1, v.end());
  return s;
}

}  // namespace

Assignment hungarian(const CostMatrix& cost) {
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  double max_abs = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!std::isfinite(cost(r, c))) {
        throw InputError("cost matrix entry (" + std::to_string(r) + "," + std::to_string(c) +
                         ") is not finite");
      }
      max_abs = std::max(max_abs, std::abs(cost(r, c)));
    }
  }
  Assignment result;
  if (rows == 0 || cols == 0) return result;

  const std::size_t n = std::max(rows, cols);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r * n + c] = cost(r, c);
  }
  Solved s = solve_square(a, n);

  const double tol = 1e-10 * (1.0 + max_abs) * static_cast<double>(n);
  auto tight = [&](std::size_t r, std::size_t c) {
    return a[r * n + c] - s.u[r] - s.v[c] <= tol;
  };

  std::vector<std::size_t> row_to_col = s.row_to_col;
  std::vector<std::size_t> col_to_row(n);
  for (std::size_t r = 0; r < n; ++r) col_to_row[row_to_col[r]] = r;
  std::vector<char> fixed_row(n, 0);
  std::vector<char> visited(n);

  // Moves `row` to another tight column, ending the alternating path at
  // `target` (the column being vacated).
  std::function<bool(std::size_t, std::size_t)> reroute = [&](std::size_t row,
                                                             std::size_t target) -> bool {
    for (std::size_t c = 0; c < n; ++c) {
      if (visited[c] || !tight(row, c)) continue;
      if (c != target && fixed_row[col_to_row[c]]) continue;
      visited[c] = 1;
      if (c == target || reroute(col_to_row[c], target)) {
        row_to_col[row] = c;
        col_to_row[c] = row;
        return true;
      }
    }
    return false;
  };

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (row_to_col[r] == c) break;
      if (!tight(r, c) || fixed_row[col_to_row[c]]) continue;
      const std::size_t vacated = row_to_col[r];
      const std::size_t displaced = col_to_row[c];
      std::fill(visited.begin(), visited.end(), 0);
      visited[c] = 1;
      // While searching, row r still nominally owns `vacated`; the displaced
      // row may take it, which ends the path.
      fixed_row[r] = 1;
      const bool moved = reroute(displaced, vacated);
      fixed_row[r] = 0;
      if (moved) {
        row_to_col[r] = c;
        col_to_row[c] = r;
        break;
      }
    }
    fixed_row[r] = 1;
  }

  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = row_to_col[r];
    if (c < cols) {
      result.pairs.emplace_back(r, c);
      result.total_cost += cost(r, c);
    }
  }
  return result;
}

Assignment hungarian_gated(CostMatrix cost, const std::vector<char>& allowed) {
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  if (allowed.size() != rows * cols) throw InputError("gate mask size does not match cost matrix");
  double max_allowed = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (allowed[r * cols + c]) max_allowed = std::max(max_allowed, std::abs(cost(r, c)));
    }
  }
  const double excluded =
      1.0 + 2.0 * static_cast<double>(std::max(rows, cols)) * (1.0 + max_allowed);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!allowed[r * cols + c]) cost(r, c) = excluded;
    }
  }
  Assignment full = hungarian(cost);
  Assignment out;
  for (const auto& [r, c] : full.pairs) {
    if (!allowed[r * cols + c]) continue;
    out.pairs.emplace_back(r, c);
    out.total_cost += cost(r, c);
  }
  return out;
}

}  // namespace trajforge
