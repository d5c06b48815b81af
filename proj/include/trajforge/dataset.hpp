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

#ifndef TRAJFORGE__DATASET_HPP_
#define TRAJFORGE__DATASET_HPP_

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "trajforge/geometry.hpp"

namespace trajforge {

using Point2 = std::array<double, 2>;

struct WindowConfig {
  int past_len = 20;    // L frames of history before the current one
  int future_len = 60;  // M frames
  int stride = 5;
  double sample_hz = 10.0;
  std::set<ObjectClass> allowed_classes = {
      ObjectClass::kRegularVehicle, ObjectClass::kLargeVehicle,   ObjectClass::kBus,
      ObjectClass::kBoxTruck,       ObjectClass::kTruck,          ObjectClass::kVehicularTrailer,
      ObjectClass::kSchoolBus,      ObjectClass::kArticulatedBus, ObjectClass::kVehicle};

  void validate() const;
  int window_size() const { return past_len + future_len + 1; }
};

// Agent-centric frame: world = R(heading) * local + origin.
struct RigidTransform {
  Point2 origin = {0.0, 0.0};
  double heading = 0.0;

  Point2 to_world(const Point2& local) const;
  Point2 to_local(const Point2& world) const;

  friend bool operator==(const RigidTransform&, const RigidTransform&) = default;
};

struct ForecastSample {
  std::uint64_t sample_id = 0;
  std::string scene_id;
  std::int64_t track_id = 0;
  double anchor_t = 0.0;
  std::vector<Point2> past;    // L+1 positions, past.back() == (0, 0)
  std::vector<Point2> future;  // M positions
  RigidTransform to_world;
  Provenance provenance;
  // Score of the current state for pseudo-labeled sources; 1 for ground truth.
  double score = 1.0;

  friend bool operator==(const ForecastSample&, const ForecastSample&) = default;
};

struct SampleSet {
  int past_len = 20;
  int future_len = 60;
  std::vector<ForecastSample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

struct SplitSpec {
  double fraction = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Heading of the agent-centric frame for the window ending at `anchor`.
double anchor_heading(const std::vector<TrajState>& states, std::size_t anchor);

// Builds one sample around states[anchor]. `with_future` = false leaves the
// future empty (used when only the history is known).
ForecastSample make_sample(const Trajectory& traj, std::size_t anchor, const WindowConfig& cfg,
                           bool with_future = true);

// Sliding windows over every eligible trajectory (allowed class, at least
// L+M+1 states) at anchors L, L+stride, ... <= len-M-1, in agent-centric
// coordinates. Output is ordered by (scene_id, track_id, anchor_t) and
// sample ids are positions in that order. Throws InputError if a trajectory
// is not sampled at exactly 1/sample_hz.
SampleSet window_samples(const std::vector<Trajectory>& trajs, const WindowConfig& cfg);

// Concatenates sets and renumbers sample ids 0..n-1. Throws InputError on
// mismatched L or M (empty sets are exempt).
SampleSet merge_sets(const std::vector<SampleSet>& sets);

// Uniform random subset of ceil(fraction * N) trajectories, returned in
// canonical (scene_id, track_id) order. For a fixed seed a smaller fraction
// always selects a subset of a larger one.
std::vector<Trajectory> sample_fraction(const std::vector<Trajectory>& trajs, const SplitSpec& spec);

// The same per-trajectory selection applied to samples: keeps every sample
// whose (scene_id, track_id) belongs to the chosen trajectories.
SampleSet sample_fraction(const SampleSet& set, const SplitSpec& spec);

// Number of items selected from n for a fraction.
std::size_t fraction_count(std::size_t n, double fraction);

}  // namespace trajforge

#endif  // TRAJFORGE__DATASET_HPP_
