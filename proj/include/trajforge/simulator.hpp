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

#ifndef TRAJFORGE__SIMULATOR_HPP_
#define TRAJFORGE__SIMULATOR_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajforge/geometry.hpp"

namespace trajforge {

enum class MotionModel : int {
  kConstantVelocity = 0,
  kConstantTurn,
  kStopAndGo,
  kLaneChange,
};

struct SceneConfig {
  double duration = 20.0;  // seconds
  double frame_hz = 10.0;
  int min_agents = 3;
  int max_agents = 6;
  double roi = 60.0;  // square half-extent, meters
  // Weights over {constant-velocity, constant-turn, stop-and-go, lane-change}.
  std::array<double, 4> motion_mix = {0.4, 0.25, 0.15, 0.2};
  double min_speed = 1.0;  // m/s
  double max_speed = 6.0;
  std::uint64_t seed = 1;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
  int frames() const;  // duration * frame_hz + 1
};

struct ScoreModel {
  double tp_mean = 0.8;
  double tp_sigma = 0.1;
  double fp_mean = 0.3;
  double fp_sigma = 0.1;
};

// A simulated detector: localization noise, range-dependent misses, Poisson
// false positives and a score distribution.
struct DetectorProfile {
  std::string profile_id = "moderate";
  double pos_sigma = 0.1;
  double dim_sigma = 0.1;
  double yaw_sigma = 0.02;
  // Systematic heading offset added to every true-positive box.
  double yaw_bias = 0.0;
  double miss_base = 0.05;
  double miss_range_coeff = 0.001;
  double fp_rate = 0.5;
  ScoreModel score_model;
  double detect_hz = 10.0;  // 2 or 10

  void validate() const;

  // No noise, no misses, no false positives.
  static DetectorProfile noiseless(std::string id = "noiseless", double hz = 10.0);
};

struct DetectionFrame {
  std::string scene_id;
  double t = 0.0;
  std::vector<Box3D> boxes;

  friend bool operator==(const DetectionFrame&, const DetectionFrame&) = default;
};

// splitmix64 finalizer over (base, stream, index). Every per-scene or
// per-stage random stream is seeded through this so results do not depend on
// generation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

// Stream tags for derive_seed.
namespace seed_stream {
inline constexpr std::uint64_t kScene = 0x5CE7E;
inline constexpr std::uint64_t kDetect = 0xDE7EC7;
inline constexpr std::uint64_t kShuffle = 0x5F1E;
inline constexpr std::uint64_t kInit = 0x1417;
inline constexpr std::uint64_t kFraction = 0xF4AC;
inline constexpr std::uint64_t kAnchors = 0xA4C8;
inline constexpr std::uint64_t kReplicate = 0x4E9;
}  // namespace seed_stream

std::string scene_name(std::uint64_t index);
// Inverse of scene_name; empty for any other string.
std::optional<std::uint64_t> scene_index(std::string_view name);

// Ground-truth trajectories for one scene. Deterministic in cfg (including
// cfg.seed). Every trajectory spans the whole duration at frame_hz, stays in
// the ROI, and has yaw along the velocity direction.
std::vector<Trajectory> generate_scene(const SceneConfig& cfg, const std::string& scene_id);

// Regroups trajectories of one scene into per-frame ground-truth boxes.
std::vector<DetectionFrame> gt_frames(const std::vector<Trajectory>& scene);

// Simulated detections at profile.detect_hz. `roi` bounds false-positive
// placement. Deterministic in (frames, profile, seed).
std::vector<DetectionFrame> detect(const std::vector<DetectionFrame>& gt,
                                   const DetectorProfile& profile, std::uint64_t seed,
                                   double roi = 60.0);

}  // namespace trajforge

#endif  // TRAJFORGE__SIMULATOR_HPP_
