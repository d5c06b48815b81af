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
#include "trajforge/simulator.hpp"
#include "trajforge/tracker.hpp"

using namespace trajforge;

namespace {

Box3D box(double cx, double cy, double score = 0.9, double t = 0.0) {
  Box3D b;
  b.cx = cx;
  b.cy = cy;
  b.length = 4.0;
  b.width = 2.0;
  b.score = score;
  b.t = t;
  return b;
}

// Agents moving east at 1 m/s from the given y offsets, sampled at 10 Hz.
std::vector<DetectionFrame> eastbound(std::vector<double> ys, int frames = 201) {
  std::vector<DetectionFrame> out;
  for (int f = 0; f < frames; ++f) {
    DetectionFrame d;
    d.scene_id = "s";
    d.t = f * 0.1;
    for (double y : ys) d.boxes.push_back(box(-10.0 + f * 0.1, y, 0.9, d.t));
    out.push_back(d);
  }
  return out;
}

TrackerConfig exact() {
  return match_measurement_noise(TrackerConfig{}, DetectorProfile::noiseless());
}

}  // namespace

TEST_SUITE("tracker") {
  TEST_CASE("nms") {
    TrackerConfig cfg;
    DetectionFrame f;
    f.boxes = {box(0, 0, 0.8), box(0, 0, 0.9)};
    auto kept = nms(f, cfg);
    REQUIRE(kept.boxes.size() == 1);
    CHECK(kept.boxes[0].score == 0.9);

    f.boxes = {box(0, 0, 0.1)};
    CHECK(nms(f, cfg).boxes.empty());

    f.boxes = {box(0, 0, 0.5), box(20, 0, 0.7), box(-20, 0, 0.6)};
    kept = nms(f, cfg);
    REQUIRE(kept.boxes.size() == 3);
    CHECK(kept.boxes[0].score == 0.7);
    CHECK(kept.boxes[2].score == 0.5);
  }

  TEST_CASE("kalman predict") {
    TrackerConfig cfg;
    KalmanTrack t = init_track(box(0, 0), 1, cfg);
    t.mean(4) = 1.0;
    const auto p = kalman_predict(t, 0.1, cfg);
    CHECK(p.mean(0) == doctest::Approx(0.1));

    KalmanTrack still = init_track(box(3, 4), 1, cfg);
    still.cov = KalmanTrack::Covariance::Identity();
    const auto q = kalman_predict(still, 0.1, cfg);
    CHECK(q.mean(0) == 3.0);
    CHECK(q.mean(1) == 4.0);
    for (int i = 0; i < 4; ++i) CHECK(q.cov(i, i) > still.cov(i, i));
    CHECK(q.cov(4, 4) == doctest::Approx(1.0 + cfg.process_noise_q[4]));
  }

  TEST_CASE("kalman update") {
    TrackerConfig cfg;
    KalmanTrack t = init_track(box(1, 2), 1, cfg);
    const auto same = kalman_update(t, box(1, 2), cfg);
    CHECK(same.mean(0) == doctest::Approx(1.0));
    CHECK(same.mean(1) == doctest::Approx(2.0));
    CHECK(same.cov.trace() <= t.cov.trace());

    cfg.measurement_noise_r = {1e-12, 1e-12, 1e-12, 1e-12};
    const auto tight = kalman_update(t, box(5, -3), cfg);
    CHECK(tight.mean(0) == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(tight.mean(1) == doctest::Approx(-3.0).epsilon(1e-6));

    // Equal prior and measurement variance: the posterior splits the difference.
    TrackerConfig eq;
    KalmanTrack z = init_track(box(0, 0), 1, eq);
    z.cov = KalmanTrack::Covariance::Identity() * eq.measurement_noise_r[0];
    const auto half = kalman_update(z, box(1, 0), eq);
    CHECK(half.mean(0) == doctest::Approx(0.5));
  }

  TEST_CASE("single agent is recovered exactly") {
    const auto out = track_sequence(eastbound({0.0}), exact(), "noiseless");
    REQUIRE(out.size() == 1);
    CHECK(out[0].states.size() == 201);
    for (const auto& s : out[0].states) {
      CHECK(std::abs(s.cx - (-10.0 + s.t)) <= 1e-6);
      CHECK(std::abs(s.cy) <= 1e-6);
    }
    CHECK(out[0].provenance == Provenance::pseudo("noiseless"));
  }

  TEST_CASE("parallel agents keep their identities") {
    const auto out = track_sequence(eastbound({0.0, 10.0}), exact(), "noiseless");
    REQUIRE(out.size() == 2);
    for (const auto& t : out) {
      const double y = t.states.front().cy;
      for (const auto& s : t.states) CHECK(std::abs(s.cy - y) <= 1e-6);
    }
    CHECK(std::abs(out[0].states.front().cy - out[1].states.front().cy) == doctest::Approx(10.0));
  }

  TEST_CASE("dropped frames are bridged") {
    auto frames = eastbound({0.0});
    for (std::size_t f = 1; f < frames.size(); f += 3) frames[f].boxes.clear();
    const auto out = track_sequence(frames, exact(), "p");
    REQUIRE(out.size() == 1);
    CHECK(out[0].states.size() == 201);
  }

  TEST_CASE("short-lived tracks are dropped") {
    const auto out = track_sequence(eastbound({0.0}, 2), exact(), "p");
    CHECK(out.empty());
  }

  TEST_CASE("unsorted frames") {
    auto frames = eastbound({0.0}, 5);
    std::swap(frames[1], frames[2]);
    CHECK_THROWS_AS(track_sequence(frames, TrackerConfig{}, "p"), InputError);
  }
}
