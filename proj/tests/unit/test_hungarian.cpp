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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "trajforge/errors.hpp"
#include "trajforge/hungarian.hpp"

using namespace trajforge;

TEST_SUITE("hungarian") {
  TEST_CASE("small cases") {
    const auto a = hungarian(CostMatrix{{1, 2}, {2, 1}});
    CHECK(a.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}});
    CHECK(a.total_cost == 2.0);
    const auto b = hungarian(CostMatrix{{5}});
    CHECK(b.pairs.size() == 1);
    CHECK(b.total_cost == 5.0);
  }

  TEST_CASE("ties resolve to the lexicographically smallest pairs") {
    const auto a = hungarian(CostMatrix(3, 3, 1.0));
    CHECK(a.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {2, 2}});
    const auto wide = hungarian(CostMatrix{{0, 0, 0}, {0, 0, 0}});
    CHECK(wide.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}});
  }

  TEST_CASE("random 5x5 against all permutations") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 200; ++rep) {
      CostMatrix c(5, 5);
      for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t k = 0; k < 5; ++k) c(r, k) = static_cast<double>(rng() % 20);
      std::vector<std::size_t> perm(5);
      std::iota(perm.begin(), perm.end(), 0);
      double best = 1e300;
      do {
        double s = 0;
        for (std::size_t r = 0; r < 5; ++r) s += c(r, perm[r]);
        best = std::min(best, s);
      } while (std::next_permutation(perm.begin(), perm.end()));
      CHECK(hungarian(c).total_cost == best);
    }
  }

  TEST_CASE("rectangular and gated") {
    const auto tall = hungarian(CostMatrix{{4, 1}, {2, 8}, {0, 9}});
    CHECK(tall.pairs.size() == 2);
    CHECK(tall.total_cost == 1.0);
    CostMatrix c{{1, 100}, {100, 1}};
    const auto g = hungarian_gated(c, {1, 0, 0, 0});
    CHECK(g.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}});
  }

  TEST_CASE("non-finite costs") {
    CHECK_THROWS_AS(hungarian(CostMatrix{{1, NAN}, {0, 0}}), InputError);
    CHECK_THROWS_AS(hungarian(CostMatrix{{INFINITY}}), InputError);
  }
}
