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

#ifndef TRAJFORGE__TRACKER_HPP_
#define TRAJFORGE__TRACKER_HPP_

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "trajforge/geometry.hpp"
#include "trajforge/simulator.hpp"

namespace trajforge {

enum class AssociationCost { kNegIoU, kCenterDistance };

struct TrackerConfig {
  double nms_score_threshold = 0.2;
  double nms_iou_threshold = 0.5;
  double gate_center_distance = 2.0;  // meters
  int min_hits = 3;
  int max_age = 2;  // frames without an update before termination
  // Variances added per predict over [cx, cy, cz, yaw, vx, vy].
  std::array<double, 6> process_noise_q = {0.001, 0.001, 0.001, 0.001, 0.04, 0.04};
  // Measurement variances over [cx, cy, cz, yaw].
  std::array<double, 4> measurement_noise_r = {0.04, 0.04, 0.04, 0.01};
  double initial_velocity_variance = 100.0;
  // Tracks with a single hit have no velocity estimate yet, so their gate is
  // widened to cover this speed over the frame interval.
  double birth_speed_gate = 20.0;  // m/s
  double dims_ema_alpha = 0.5;
  double output_hz = 10.0;
  AssociationCost association_cost = AssociationCost::kCenterDistance;

  void validate() const;
};

// Returns `base` with the measurement variances set to the profile's noise
// variances (floored at 1e-12).
TrackerConfig match_measurement_noise(TrackerConfig base, const DetectorProfile& profile);

struct KalmanTrack {
  using State = Eigen::Matrix<double, 6, 1>;  // cx, cy, cz, yaw, vx, vy
  using Covariance = Eigen::Matrix<double, 6, 6>;

  std::int64_t track_id = 0;
  ObjectClass class_id = ObjectClass::kVehicle;
  State mean = State::Zero();
  Covariance cov = Covariance::Identity();
  double length = 1.0;
  double width = 1.0;
  double height = 1.0;
  int hits = 1;
  int age_since_update = 0;
  double last_score = 0.0;
  std::vector<TrajState> history;

  Box3D predicted_box() const;
};

// Boxes below the score threshold are dropped, the rest are visited in
// descending score order and suppress later boxes of the same class whose BEV
// IoU with a kept box exceeds the IoU threshold. Output is sorted by score.
DetectionFrame nms(const DetectionFrame& frame, const TrackerConfig& cfg);

KalmanTrack init_track(const Box3D& det, std::int64_t track_id, const TrackerConfig& cfg);
KalmanTrack kalman_predict(const KalmanTrack& track, double dt, const TrackerConfig& cfg);
KalmanTrack kalman_update(const KalmanTrack& track, const Box3D& det, const TrackerConfig& cfg);

// Tracking-by-detection over the ordered frames of one scene. Returns every
// track with at least min_hits updates, resampled to cfg.output_hz, tagged
// Pseudo(profile_id). Throws InputError if frames are unsorted or mix scenes.
std::vector<Trajectory> track_sequence(const std::vector<DetectionFrame>& frames,
                                       const TrackerConfig& cfg, const std::string& profile_id);

}  // namespace trajforge

#endif  // TRAJFORGE__TRACKER_HPP_
