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

#include <cmath>
#include <set>

#include "doctest.h"
#include "trajforge/dataset.hpp"
#include "trajforge/errors.hpp"
#include "trajforge/simulator.hpp"

using namespace trajforge;

namespace {

Trajectory straight(std::int64_t id, int n, double speed = 1.0, double heading = 0.0, std::string scene = "s") {
  Trajectory t;
  t.scene_id = std::move(scene);
  t.track_id = id;
  for (int i = 0; i < n; ++i) {
    TrajState s;
    s.t = i * 0.1;
    s.cx = 3.0 + std::cos(heading) * speed * s.t;
    s.cy = -2.0 + std::sin(heading) * speed * s.t;
    s.yaw = heading;
    t.states.push_back(s);
  }
  return t;
}

std::vector<Trajectory> many(int n) {
  std::vector<Trajectory> out;
  for (int i = 0; i < n; ++i) out.push_back(straight(i, 81, 1.0, 0.0, scene_name(static_cast<std::uint64_t>(i / 7))));
  return out;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("window counting") {
    WindowConfig cfg;
    CHECK(window_samples({straight(1, 81)}, cfg).size() == 1);
    CHECK(window_samples({straight(1, 80)}, cfg).size() == 0);
    CHECK(window_samples({straight(1, 91)}, cfg).size() == 3);
  }

  TEST_CASE("canonical frame") {
    const auto set = window_samples({straight(1, 81)}, WindowConfig{});
    const auto& s = set.samples.at(0);
    REQUIRE(s.past.size() == 21);
    REQUIRE(s.future.size() == 60);
    CHECK(s.past.back() == Point2{0.0, 0.0});
    for (std::size_t i = 1; i < s.past.size(); ++i) {
      CHECK(s.past[i][0] - s.past[i - 1][0] == doctest::Approx(0.1));
      CHECK(s.past[i][1] - s.past[i - 1][1] == doctest::Approx(0.0));
    }
    CHECK(s.future[0][0] == doctest::Approx(0.1));
    CHECK(s.to_world.heading == doctest::Approx(0.0));
  }

  TEST_CASE("rotation invariance") {
    const auto a = window_samples({straight(1, 81, 2.0, 0.0)}, WindowConfig{}).samples.at(0);
    const auto b = window_samples({straight(1, 81, 2.0, 2.1)}, WindowConfig{}).samples.at(0);
    for (std::size_t i = 0; i < a.future.size(); ++i) {
      CHECK(a.future[i][0] == doctest::Approx(b.future[i][0]));
      CHECK(a.future[i][1] == doctest::Approx(b.future[i][1]).epsilon(1e-9));
    }
    const Point2 w = b.to_world.to_world(b.future.back());
    const auto& last = straight(1, 81, 2.0, 2.1).states.back();
    CHECK(w[0] == doctest::Approx(last.cx));
    CHECK(w[1] == doctest::Approx(last.cy));
  }

  TEST_CASE("class filter and sampling errors") {
    auto ped = straight(1, 81);
    ped.class_id = ObjectClass::kPedestrian;
    CHECK(window_samples({ped}, WindowConfig{}).empty());
    auto bad = straight(1, 81);
    bad.states[40].t += 0.03;
    CHECK_THROWS_AS(window_samples({bad}, WindowConfig{}), InputError);
  }

  TEST_CASE("merge") {
    const auto a = window_samples({straight(1, 91)}, WindowConfig{});
    const auto b = window_samples({straight(2, 81)}, WindowConfig{});
    const auto m = merge_sets({a, b});
    CHECK(m.size() == 4);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(m.samples[i].sample_id == i);
    CHECK(merge_sets({a}).samples == a.samples);
    CHECK(merge_sets({SampleSet{}, a}).samples == a.samples);
    WindowConfig shorter;
    shorter.future_len = 30;
    CHECK_THROWS_AS(merge_sets({a, window_samples({straight(3, 81)}, shorter)}), InputError);
  }

  TEST_CASE("fractions") {
    const auto all = many(700);
    CHECK(sample_fraction(all, {1.0, 3}) == all);
    CHECK(sample_fraction(all, {0.1, 3}).size() == 70);
    CHECK(sample_fraction(all, {0.1, 3}) == sample_fraction(all, {0.1, 3}));
    CHECK(fraction_count(700, 0.01) == 7);
    CHECK(fraction_count(5, 0.01) == 1);
    std::set<std::pair<std::string, std::int64_t>> large;
    for (const auto& t : sample_fraction(all, {0.1, 9})) large.insert({t.scene_id, t.track_id});
    for (const auto& t : sample_fraction(all, {0.01, 9})) CHECK(large.contains({t.scene_id, t.track_id}));

    const auto set = window_samples(all, WindowConfig{});
    const auto sub = sample_fraction(set, {0.1, 3});
    CHECK(sub.size() == 70);
  }
}
