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

#ifndef TRAJFORGE__FORECASTER_HPP_
#define TRAJFORGE__FORECASTER_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "trajforge/dataset.hpp"

namespace trajforge {

struct ForecasterShape {
  int past_len = 20;    // L
  int future_len = 60;  // M
  int hidden = 64;      // H
  int modes = 6;        // K

  int input_dim() const { return 2 * past_len + 3; }
  int output_dim() const { return modes * (2 * future_len + 1); }
  // Flat layout: W1 (H x D, row-major), b1 (H), W2 (P x H, row-major), b2 (P).
  std::size_t param_count() const;

  friend bool operator==(const ForecasterShape&, const ForecasterShape&) = default;
};

// Two-layer MLP with anchor-seeded multi-modal output.
//
// Output row layout of W2/b2: rows [k * 2M, (k + 1) * 2M) hold mode k's
// residuals as (x_1, y_1, ..., x_M, y_M); the last K rows are mode logits.
struct ForecasterParams {
  ForecasterShape shape;
  Eigen::VectorXd theta;         // flat parameter vector
  std::vector<Point2> anchors;   // K endpoint anchors, agent-centric

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> w1() const;
  Eigen::Map<const Eigen::VectorXd> b1() const;
  Eigen::Map<const RowMajor> w2() const;
  Eigen::Map<const Eigen::VectorXd> b2() const;

  // Small random W1, zero everything else: every mode starts on its anchor
  // ramp with uniform confidence.
  static ForecasterParams initialize(const ForecasterShape& shape, std::vector<Point2> anchors,
                                     std::uint64_t seed);

  // Throws InputError on a size mismatch, non-finite entry or duplicate anchors.
  void validate() const;
};

struct ForecastOutput {
  std::vector<std::vector<Point2>> modes;  // K x M
  std::vector<double> confidences;         // K, sums to 1
};

struct LossBreakdown {
  double ade_term = 0.0;
  double conf_term = 0.0;
  double total = 0.0;
};

struct LossOptions {
  double conf_weight = 1.0;
};

// L displacement pairs, current speed, and (cos, sin) of the mean heading of
// the last three displacements.
Eigen::VectorXd featurize(const ForecastSample& sample, double sample_hz = 10.0);

ForecastOutput forward(const ForecasterParams& params, const ForecastSample& sample);
ForecastOutput forward_features(const ForecasterParams& params, const Eigen::VectorXd& x);

double average_displacement(const std::vector<Point2>& a, const std::vector<Point2>& b);

// Winner-take-all ADE plus cross-entropy on the winning mode's confidence,
// averaged over the batch. The gradient is exact backpropagation with the
// winner held fixed. Throws InputError on an empty batch.
LossBreakdown loss_and_grad(const ForecasterParams& params,
                            std::span<const ForecastSample* const> batch,
                            const LossOptions& opts, Eigen::VectorXd* grad);
LossBreakdown loss_and_grad(const ForecasterParams& params,
                            const std::vector<ForecastSample>& batch, const LossOptions& opts,
                            Eigen::VectorXd* grad);

// k-means++ (50 Lloyd iterations) over future endpoints. Falls back to a
// radial grid when fewer than K distinct endpoints exist. Throws InputError on
// an empty set.
std::vector<Point2> fit_anchors(const std::vector<ForecastSample>& samples, int modes,
                                std::uint64_t seed);
std::vector<Point2> radial_anchor_grid(int modes);

}  // namespace trajforge

#endif  // TRAJFORGE__FORECASTER_HPP_
