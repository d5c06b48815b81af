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

#ifndef TRAJFORGE__METRICS_HPP_
#define TRAJFORGE__METRICS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "trajforge/dataset.hpp"
#include "trajforge/forecaster.hpp"

namespace trajforge {

enum class QualityMatchCost { kMeanPast, kCurrentPosition };

struct MetricsConfig {
  int k = 6;
  double miss_threshold = 2.0;   // meters
  double match_threshold = 2.0;  // meters
  QualityMatchCost quality_match_cost = QualityMatchCost::kMeanPast;

  void validate() const;
};

struct SampleMetrics {
  double min_ade = 0.0;
  double min_fde = 0.0;
  double brier_fde = 0.0;
  bool miss = false;
  int best_mode = 0;  // minFDE-achieving mode
};

struct MetricsReport {
  std::size_t n_samples = 0;
  double min_ade = 0.0;
  double min_fde = 0.0;
  double brier_fde = 0.0;
  double miss_rate = 0.0;
};

struct QualityReport {
  MetricsReport metrics;
  std::size_t n_gt_windows = 0;
  std::size_t n_pseudo_windows = 0;
  std::size_t n_matched = 0;
  double match_rate = 0.0;
  bool empty = true;  // no matched pairs
};

struct E2EPrediction {
  Box3D first_frame;  // detected box at the forecast start; score ranks predictions
  ForecastOutput forecast;  // world coordinates
  std::int64_t group = 0;   // matching only happens within a group
};

struct E2EGroundTruth {
  Point2 first_frame = {0.0, 0.0};
  std::vector<Point2> future;  // world coordinates
  std::int64_t group = 0;
};

struct E2EReport {
  double map_f = 0.0;
  std::size_t n_true_positives = 0;
  std::size_t n_false_predictions = 0;
  std::size_t n_missed_gt = 0;
  double matched_min_ade = 0.0;  // over true positives
  double matched_min_fde = 0.0;
};

// Throws InputError if the output has fewer than k modes or a mode's length
// differs from the ground truth.
SampleMetrics eval_sample(const ForecastOutput& output, const std::vector<Point2>& gt_future,
                          const MetricsConfig& cfg);

// Means over the per-sample records. Throws InputError when empty.
MetricsReport eval_set(const std::vector<SampleMetrics>& records);
MetricsReport eval_set(const std::vector<ForecastOutput>& outputs,
                       const std::vector<std::vector<Point2>>& gt_futures, const MetricsConfig& cfg);

// Runs the forecaster over a sample set and scores it.
MetricsReport evaluate(const ForecasterParams& params, const SampleSet& set, const MetricsConfig& cfg);

// Pseudo-label quality: windows both trajectory sets at shared anchor frames,
// matches pseudo to ground-truth windows one-to-one by past distance (world
// frame, gated at match_threshold) and scores each matched pseudo future as a
// single confident mode against the ground-truth future.
QualityReport assess_pseudo_quality(const std::vector<Trajectory>& pseudo,
                                    const std::vector<Trajectory>& gt, const WindowConfig& wcfg,
                                    const MetricsConfig& mcfg);

// Forecasting mAP: predictions are taken by descending score and greedily
// matched to the nearest unmatched ground truth of the same group within
// match_threshold of the first frame. A match is a true positive iff its
// minFDE over the first k modes is within miss_threshold. AP is the area under
// the all-point interpolated precision/recall curve. Throws InputError if gt is
// empty.
E2EReport map_f(const std::vector<E2EPrediction>& preds, const std::vector<E2EGroundTruth>& gt,
                const MetricsConfig& cfg);

// Area under the monotone envelope of precision over recall.
double average_precision(const std::vector<bool>& is_tp_by_rank, std::size_t n_gt);

}  // namespace trajforge

#endif  // TRAJFORGE__METRICS_HPP_
