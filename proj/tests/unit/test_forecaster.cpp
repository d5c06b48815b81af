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
#include <random>

#include "doctest.h"
#include "trajforge/errors.hpp"
#include "trajforge/forecaster.hpp"

using namespace trajforge;

namespace {

ForecastSample eastbound(double speed, int l = 20, int m = 60) {
  ForecastSample s;
  for (int i = -l; i <= 0; ++i) s.past.push_back({speed * 0.1 * i, 0.0});
  for (int i = 1; i <= m; ++i) s.future.push_back({speed * 0.1 * i, 0.0});
  return s;
}

std::vector<Point2> six_anchors() { return {{10, 0}, {8, 3}, {8, -3}, {4, 0}, {0, 0}, {12, 1}}; }

}  // namespace

TEST_SUITE("forecaster") {
  TEST_CASE("features") {
    const auto still = featurize(eastbound(0.0));
    REQUIRE(still.size() == 43);
    for (int i = 0; i < 41; ++i) CHECK(still[i] == 0.0);
    const auto x = featurize(eastbound(1.0));
    for (int i = 0; i < 20; ++i) {
      CHECK(x[2 * i] == doctest::Approx(0.1));
      CHECK(x[2 * i + 1] == doctest::Approx(0.0));
    }
    CHECK(x[40] == doctest::Approx(1.0));
    CHECK(x[41] == doctest::Approx(1.0));
    CHECK(x[42] == doctest::Approx(0.0));
  }

  TEST_CASE("zero parameters ride the anchor ramps") {
    ForecasterParams p;
    p.shape = {};
    p.anchors = six_anchors();
    p.theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.shape.param_count()));
    const auto out = forward(p, eastbound(1.0));
    for (int k = 0; k < 6; ++k) {
      CHECK(out.confidences[k] == doctest::Approx(1.0 / 6.0));
      CHECK(out.modes[k][29][0] == doctest::Approx(p.anchors[k][0] * 0.5));
      CHECK(out.modes[k].back()[1] == doctest::Approx(p.anchors[k][1]));
    }
  }

  TEST_CASE("softmax") {
    ForecasterParams p = ForecasterParams::initialize({}, six_anchors(), 1);
    p.theta.setZero();
    const auto b2 = static_cast<Eigen::Index>(p.shape.param_count()) - p.shape.output_dim();
    p.theta[b2 + 6 * 120] = 1.0;
    const auto out = forward(p, eastbound(1.0));
    CHECK(out.confidences[0] == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 5.0)));
    CHECK(out.confidences[0] == doctest::Approx(0.3521).epsilon(1e-4));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 1);
    for (auto& v : p.theta) v = g(rng);
    const auto r = forward(p, eastbound(2.0));
    double sum = 0;
    for (double c : r.confidences) sum += c;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }

  TEST_CASE("loss") {
    ForecasterParams p = ForecasterParams::initialize({}, six_anchors(), 1);
    p.theta.setZero();
    auto s = eastbound(1.0);
    for (int i = 0; i < 60; ++i) s.future[i] = {10.0 * (i + 1) / 60.0, 0.0};
    const auto l = loss_and_grad(p, std::vector<ForecastSample>{s}, {}, nullptr);
    CHECK(l.ade_term == doctest::Approx(0.0));
    CHECK(l.conf_term == doctest::Approx(std::log(6.0)));
    CHECK_THROWS_AS(loss_and_grad(p, std::vector<ForecastSample>{}, {}, nullptr), InputError);
  }

  TEST_CASE("finite-difference gradient") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0, 1);
    const ForecasterShape shape{4, 5, 6, 3};
    std::vector<ForecastSample> batch;
    for (int n = 0; n < 4; ++n) {
      auto s = eastbound(1.0 + g(rng), 4, 5);
      for (auto& f : s.future) f[1] += g(rng);
      batch.push_back(s);
    }
    ForecasterParams p = ForecasterParams::initialize(shape, {{1, 0}, {0, 1}, {-1, 0}}, 2);
    for (auto& v : p.theta) v = 0.3 * g(rng);
    Eigen::VectorXd grad;
    loss_and_grad(p, batch, {}, &grad);
    double worst = 0;
    for (Eigen::Index i = 0; i < p.theta.size(); ++i) {
      ForecasterParams q = p;
      q.theta[i] += 1e-5;
      const double up = loss_and_grad(q, batch, {}, nullptr).total;
      q.theta[i] -= 2e-5;
      const double down = loss_and_grad(q, batch, {}, nullptr).total;
      const double num = (up - down) / 2e-5;
      worst = std::max(worst, std::abs(num - grad[i]) / std::max({std::abs(num), std::abs(grad[i]), 1e-6}));
    }
    CHECK(worst <= 1e-4);
  }

  TEST_CASE("parameter validation") {
    ForecasterParams p = ForecasterParams::initialize({}, six_anchors(), 1);
    p.theta[0] = NAN;
    CHECK_THROWS_AS(p.validate(), InputError);
    auto dup = six_anchors();
    dup[1] = dup[0];
    CHECK_THROWS_AS(ForecasterParams::initialize({}, dup, 1).validate(), InputError);
  }

  TEST_CASE("anchors") {
    std::vector<ForecastSample> distinct;
    for (int k = 0; k < 6; ++k) {
      ForecastSample s = eastbound(1.0);
      s.future.back() = {static_cast<double>(k), 2.0 * k};
      distinct.push_back(s);
    }
    auto a = fit_anchors(distinct, 6, 1);
    std::sort(a.begin(), a.end());
    for (int k = 0; k < 6; ++k) CHECK(a[k] == Point2{static_cast<double>(k), 2.0 * k});

    std::vector<ForecastSample> same(10, eastbound(1.0));
    CHECK(fit_anchors(same, 6, 1) == radial_anchor_grid(6));

    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0, 0.5);
    std::vector<ForecastSample> blobs;
    for (int i = 0; i < 200; ++i) {
      ForecastSample s = eastbound(1.0);
      s.future.back() = i % 2 ? Point2{20 + g(rng), g(rng)} : Point2{g(rng), 15 + g(rng)};
      blobs.push_back(s);
    }
    auto b = fit_anchors(blobs, 2, 1);
    std::sort(b.begin(), b.end());
    CHECK(std::hypot(b[0][0], b[0][1] - 15) < 0.5);
    CHECK(std::hypot(b[1][0] - 20, b[1][1]) < 0.5);
    CHECK_THROWS_AS(fit_anchors({}, 6, 1), InputError);
  }
}
