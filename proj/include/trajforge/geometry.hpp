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

#ifndef TRAJFORGE__GEOMETRY_HPP_
#define TRAJFORGE__GEOMETRY_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trajforge {

// Object categories. The nine vehicle subclasses follow the usual driving
// dataset taxonomy; pedestrians and cyclists exist so class filters have
// something to filter.
enum class ObjectClass : int {
  kRegularVehicle = 0,
  kLargeVehicle,
  kBus,
  kBoxTruck,
  kTruck,
  kVehicularTrailer,
  kSchoolBus,
  kArticulatedBus,
  kVehicle,
  kPedestrian,
  kCyclist,
};

std::string_view class_name(ObjectClass c);
// Throws InputError on an unknown name.
ObjectClass class_from_name(std::string_view name);
bool is_vehicle(ObjectClass c);

// Oriented 3D box: a detection or a ground-truth footprint at one timestamp.
struct Box3D {
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double length = 1.0;
  double width = 1.0;
  double height = 1.0;
  double yaw = 0.0;  // (-pi, pi]
  double score = 1.0;
  ObjectClass class_id = ObjectClass::kVehicle;
  double t = 0.0;

  friend bool operator==(const Box3D&, const Box3D&) = default;
};

struct TrajState {
  double t = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double yaw = 0.0;
  double length = 1.0;
  double width = 1.0;
  double height = 1.0;
  std::optional<double> score;  // absent for ground truth

  friend bool operator==(const TrajState&, const TrajState&) = default;
};

// Ground truth, or mined by a detector profile + tracker.
struct Provenance {
  enum class Kind { kGroundTruth, kPseudo };
  Kind kind = Kind::kGroundTruth;
  std::string detector_profile;  // empty for ground truth

  static Provenance ground_truth() { return {}; }
  static Provenance pseudo(std::string profile) {
    return {Kind::kPseudo, std::move(profile)};
  }
  // "gt" or "pseudo:<profile>".
  std::string to_string() const;
  static Provenance parse(std::string_view text);

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Trajectory {
  std::string scene_id;
  std::int64_t track_id = 0;
  ObjectClass class_id = ObjectClass::kVehicle;
  std::vector<TrajState> states;
  Provenance provenance;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into (-pi, pi].
double normalize_angle(double a);

// Ground-plane corners of the box footprint, counter-clockwise.
std::array<std::array<double, 2>, 4> footprint(const Box3D& b);

// Bird's-eye-view IoU of the two yaw-oriented footprints.
double bev_iou(const Box3D& a, const Box3D& b);

double center_distance(double ax, double ay, double bx, double by);
template <typename A, typename B>
double center_distance(const A& a, const B& b) {
  return center_distance(a.cx, a.cy, b.cx, b.cy);
}

// Linear interpolation onto a uniform 1/target_hz grid starting at the first
// state. Positions and dims interpolate linearly, yaw along the shortest arc
// (an exact half-turn goes the positive way). Grid points that coincide with
// an input timestamp copy that state verbatim, so endpoints survive exactly
// whenever the span is a whole number of grid steps. A trailing partial step
// is dropped. Throws InputError for fewer than two states or non-increasing
// timestamps.
Trajectory resample_linear(const Trajectory& traj, double target_hz);

// Interpolated state at time t inside [front.t, back.t].
TrajState interpolate_state(const std::vector<TrajState>& states, double t);

// Checks >= 2 states and strictly increasing timestamps.
void validate_trajectory(const Trajectory& traj);

// Frame index of a timestamp on a grid of the given rate.
std::int64_t frame_index(double t, double hz);

}  // namespace trajforge

#endif  // TRAJFORGE__GEOMETRY_HPP_
