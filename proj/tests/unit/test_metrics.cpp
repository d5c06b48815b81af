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

#include "doctest.h"
#include "trajforge/errors.hpp"
#include "trajforge/metrics.hpp"

using namespace trajforge;

namespace {

std::vector<Point2> line(double x0, double y0, int m = 10) {
  std::vector<Point2> out;
  for (int i = 1; i <= m; ++i) out.push_back({x0 + i, y0});
  return out;
}

ForecastOutput with_modes(std::vector<std::vector<Point2>> modes, std::vector<double> conf) {
  return {std::move(modes), std::move(conf)};
}

Trajectory track(std::int64_t id, double dx, double dy, int n = 81) {
  Trajectory t;
  t.scene_id = "s";
  t.track_id = id;
  for (int i = 0; i < n; ++i) {
    TrajState s;
    s.t = i * 0.1;
    s.cx = 0.5 * i * 0.1 + dx + 30.0 * static_cast<double>(id);
    s.cy = dy;
    t.states.push_back(s);
  }
  return t;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("sample metrics") {
    MetricsConfig cfg;
    cfg.k = 2;
    const auto gt = line(0, 0);
    const auto perfect = eval_sample(with_modes({line(0, 5), gt}, {0.0, 1.0}), gt, cfg);
    CHECK(perfect.min_ade == 0.0);
    CHECK(perfect.min_fde == 0.0);
    CHECK(perfect.brier_fde == 0.0);
    CHECK_FALSE(perfect.miss);
    CHECK(perfect.best_mode == 1);

    const auto off = eval_sample(with_modes({line(0, 5), line(0, 7)}, {0.5, 0.5}), gt, cfg);
    CHECK(off.min_fde == 5.0);
    CHECK(off.brier_fde == 5.25);
    CHECK(off.miss);

    CHECK_THROWS_AS(eval_sample(with_modes({line(0, 0, 9), line(0, 0, 9)}, {0.5, 0.5}), gt, cfg), InputError);
  }

  TEST_CASE("set metrics") {
    std::vector<SampleMetrics> r(3);
    r[0].min_fde = 1.0;
    r[1].min_fde = 2.5;
    r[1].miss = true;
    r[2].min_fde = 3.0;
    r[2].miss = true;
    CHECK(eval_set(r).miss_rate == doctest::Approx(2.0 / 3.0));
    const auto one = eval_set({r[1]});
    CHECK(one.min_fde == 2.5);
    CHECK(one.miss_rate == 1.0);
    auto twice = r;
    twice.insert(twice.end(), r.begin(), r.end());
    CHECK(eval_set(twice).min_fde == doctest::Approx(eval_set(r).min_fde));
    CHECK(eval_set(twice).miss_rate == doctest::Approx(eval_set(r).miss_rate));
    CHECK_THROWS_AS(eval_set(std::vector<SampleMetrics>{}), InputError);
  }

  TEST_CASE("pseudo-label quality") {
    const std::vector<Trajectory> gt = {track(0, 0, 0), track(1, 0, 0)};
    const WindowConfig w;
    const MetricsConfig m;
    const auto self = assess_pseudo_quality(gt, gt, w, m);
    CHECK_FALSE(self.empty);
    CHECK(self.metrics.min_ade == 0.0);
    CHECK(self.match_rate == 1.0);

    const auto far = assess_pseudo_quality({track(0, 3, 0), track(1, 3, 0)}, gt, w, m);
    CHECK(far.empty);
    CHECK(far.n_matched == 0);

    const auto near = assess_pseudo_quality({track(0, 0, 0.5), track(1, 0, 0.5)}, gt, w, m);
    CHECK(near.metrics.min_ade == doctest::Approx(0.5));
    CHECK(near.metrics.min_fde == doctest::Approx(0.5));
    CHECK(near.metrics.miss_rate == 0.0);
  }

  TEST_CASE("average precision") {
    CHECK(average_precision({true, false, true}, 2) == doctest::Approx(5.0 / 6.0));
    CHECK(average_precision({true, true}, 2) == doctest::Approx(1.0));
    CHECK(average_precision({false}, 1) == 0.0);
  }

  TEST_CASE("forecasting mAP") {
    MetricsConfig cfg;
    cfg.k = 1;
    std::vector<E2EGroundTruth> gt = {{{0, 0}, line(0, 0)}, {{50, 0}, line(50, 0)}};
    auto pred = [](double x, double score, std::vector<Point2> f) {
      E2EPrediction p;
      p.first_frame.cx = x;
      p.first_frame.score = score;
      p.forecast = {{std::move(f)}, {1.0}};
      return p;
    };
    CHECK(map_f({pred(0, 0.3, line(0, 0)), pred(50, 0.9, line(50, 0))}, gt, cfg).map_f == 1.0);
    CHECK(map_f({pred(20, 0.3, line(20, 0))}, gt, cfg).map_f == 0.0);
    const auto r = map_f({pred(0, 0.9, line(0, 0)), pred(50, 0.8, line(50, 9)), pred(100, 0.7, line(0, 0))}, gt, cfg);
    CHECK(r.n_true_positives == 1);
    CHECK_THROWS_AS(map_f({}, {}, cfg), InputError);
  }
}
