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

#include "trajforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "trajforge/errors.hpp"
#include "trajforge/simulator.hpp"

namespace trajforge {
namespace {

using TrackKey = std::pair<std::string, std::int64_t>;

std::vector<std::size_t> selection_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(seed, seed_stream::kFraction, 0));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

void WindowConfig::validate() const {
  if (past_len < 1) throw ConfigError("window.past_len must be >= 1");
  if (future_len < 1) throw ConfigError("window.future_len must be >= 1");
  if (stride < 1) throw ConfigError("window.stride must be >= 1");
  if (!(sample_hz > 0.0)) throw ConfigError("window.sample_hz must be > 0");
}

void SplitSpec::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("split fraction must be in (0,1]");
}

Point2 RigidTransform::to_world(const Point2& p) const {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {origin[0] + c * p[0] - s * p[1], origin[1] + s * p[0] + c * p[1]};
}

Point2 RigidTransform::to_local(const Point2& p) const {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double dx = p[0] - origin[0];
  const double dy = p[1] - origin[1];
  return {c * dx + s * dy, -s * dx + c * dy};
}

double anchor_heading(const std::vector<TrajState>& states, std::size_t anchor) {
  return normalize_angle(states[anchor].yaw);
}

ForecastSample make_sample(const Trajectory& traj, std::size_t anchor, const WindowConfig& cfg,
                           bool with_future) {
  const auto& st = traj.states;
  ForecastSample s;
  s.scene_id = traj.scene_id;
  s.track_id = traj.track_id;
  s.anchor_t = st[anchor].t;
  s.provenance = traj.provenance;
  s.score = st[anchor].score.value_or(1.0);
  s.to_world.origin = {st[anchor].cx, st[anchor].cy};
  s.to_world.heading = anchor_heading(st, anchor);
  const std::size_t first = anchor - static_cast<std::size_t>(cfg.past_len);
  s.past.reserve(cfg.past_len + 1);
  for (std::size_t i = first; i < anchor; ++i) s.past.push_back(s.to_world.to_local({st[i].cx, st[i].cy}));
  s.past.push_back({0.0, 0.0});
  if (with_future) {
    s.future.reserve(cfg.future_len);
    for (std::size_t i = anchor + 1; i <= anchor + static_cast<std::size_t>(cfg.future_len); ++i) {
      s.future.push_back(s.to_world.to_local({st[i].cx, st[i].cy}));
    }
  }
  return s;
}

SampleSet window_samples(const std::vector<Trajectory>& trajs, const WindowConfig& cfg) {
  cfg.validate();
  const double dt = 1.0 / cfg.sample_hz;
  std::vector<const Trajectory*> eligible;
  for (const auto& traj : trajs) {
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
      if (std::abs(traj.states[i].t - traj.states[i - 1].t - dt) > 1e-6) {
        throw InputError("trajectory " + traj.scene_id + "/" + std::to_string(traj.track_id) +
                         " is not uniformly sampled at " + std::to_string(cfg.sample_hz) + " Hz");
      }
    }
    if (!cfg.allowed_classes.contains(traj.class_id)) continue;
    if (traj.states.size() < static_cast<std::size_t>(cfg.window_size())) continue;
    eligible.push_back(&traj);
  }
  std::stable_sort(eligible.begin(), eligible.end(), [](const Trajectory* a, const Trajectory* b) {
    return std::tie(a->scene_id, a->track_id) < std::tie(b->scene_id, b->track_id);
  });

  SampleSet out;
  out.past_len = cfg.past_len;
  out.future_len = cfg.future_len;
  for (const Trajectory* traj : eligible) {
    const std::size_t last = traj->states.size() - 1 - static_cast<std::size_t>(cfg.future_len);
    for (std::size_t a = cfg.past_len; a <= last; a += cfg.stride) {
      ForecastSample s = make_sample(*traj, a, cfg);
      s.sample_id = out.samples.size();
      out.samples.push_back(std::move(s));
    }
  }
  return out;
}

SampleSet merge_sets(const std::vector<SampleSet>& sets) {
  SampleSet out;
  bool have_shape = false;
  for (const auto& set : sets) {
    if (set.empty()) continue;
    if (!have_shape) {
      out.past_len = set.past_len;
      out.future_len = set.future_len;
      have_shape = true;
    } else if (set.past_len != out.past_len || set.future_len != out.future_len) {
      throw InputError("merge_sets: window lengths differ (L/M " + std::to_string(set.past_len) +
                       "/" + std::to_string(set.future_len) + " vs " +
                       std::to_string(out.past_len) + "/" + std::to_string(out.future_len) + ")");
    }
    for (const auto& s : set.samples) {
      out.samples.push_back(s);
      out.samples.back().sample_id = out.samples.size() - 1;
    }
  }
  if (!have_shape && !sets.empty()) {
    out.past_len = sets.front().past_len;
    out.future_len = sets.front().future_len;
  }
  return out;
}

std::size_t fraction_count(std::size_t n, double fraction) {
  const double want = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, want)));
}

std::vector<Trajectory> sample_fraction(const std::vector<Trajectory>& trajs, const SplitSpec& spec) {
  spec.validate();
  std::vector<const Trajectory*> canonical;
  canonical.reserve(trajs.size());
  for (const auto& t : trajs) canonical.push_back(&t);
  std::stable_sort(canonical.begin(), canonical.end(), [](const Trajectory* a, const Trajectory* b) {
    return std::tie(a->scene_id, a->track_id) < std::tie(b->scene_id, b->track_id);
  });
  const auto order = selection_order(canonical.size(), spec.seed);
  std::vector<std::size_t> chosen(order.begin(),
                                  order.begin() + fraction_count(canonical.size(), spec.fraction));
  std::sort(chosen.begin(), chosen.end());
  std::vector<Trajectory> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(*canonical[i]);
  return out;
}

SampleSet sample_fraction(const SampleSet& set, const SplitSpec& spec) {
  spec.validate();
  std::vector<TrackKey> keys;
  for (const auto& s : set.samples) keys.emplace_back(s.scene_id, s.track_id);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  const auto order = selection_order(keys.size(), spec.seed);
  std::map<TrackKey, bool> chosen;
  for (std::size_t i = 0; i < fraction_count(keys.size(), spec.fraction); ++i) {
    chosen[keys[order[i]]] = true;
  }
  SampleSet out;
  out.past_len = set.past_len;
  out.future_len = set.future_len;
  for (const auto& s : set.samples) {
    if (chosen.contains({s.scene_id, s.track_id})) out.samples.push_back(s);
  }
  return out;
}

}  // namespace trajforge
