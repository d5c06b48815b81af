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

#include "trajforge/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "trajforge/errors.hpp"

namespace trajforge {
namespace {

struct Kinematics {
  double x;
  double y;
  double yaw;
};

struct Agent {
  MotionModel model = MotionModel::kConstantVelocity;
  double x0 = 0.0;
  double y0 = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double turn_rate = 0.0;
  // Stop-and-go: alternating cruise / brake / stop / accelerate segments.
  std::vector<std::pair<int, double>> phases;  // (kind, duration)
  // Lane change.
  double lc_offset = 0.0;
  double lc_start = 0.0;
  double lc_duration = 1.0;
};

constexpr int kCruise = 0;
constexpr int kBrake = 1;
constexpr int kStop = 2;
constexpr int kAccelerate = 3;

// Distance covered along the path after t seconds of a stop-and-go profile.
// Ramps are raised-cosine so speed is C1.
double stop_and_go_distance(const Agent& a, double t) {
  double s = 0.0;
  double elapsed = 0.0;
  for (const auto& [kind, dur] : a.phases) {
    const double u = std::min(t - elapsed, dur);
    if (u <= 0.0) break;
    switch (kind) {
      case kCruise:
        s += a.speed * u;
        break;
      case kBrake:
        s += 0.5 * a.speed * (u + dur / kPi * std::sin(kPi * u / dur));
        break;
      case kAccelerate:
        s += 0.5 * a.speed * (u - dur / kPi * std::sin(kPi * u / dur));
        break;
      default:
        break;
    }
    elapsed += dur;
  }
  if (t > elapsed) s += a.speed * (t - elapsed);
  return s;
}

Kinematics evaluate(const Agent& a, double t) {
  const double c = std::cos(a.heading);
  const double s = std::sin(a.heading);
  switch (a.model) {
    case MotionModel::kConstantVelocity:
      return {a.x0 + a.speed * t * c, a.y0 + a.speed * t * s, normalize_angle(a.heading)};
    case MotionModel::kConstantTurn: {
      const double w = a.turn_rate;
      const double h = a.heading + w * t;
      const double r = a.speed / w;
      return {a.x0 + r * (std::sin(h) - s), a.y0 - r * (std::cos(h) - c), normalize_angle(h)};
    }
    case MotionModel::kStopAndGo: {
      const double d = stop_and_go_distance(a, t);
      return {a.x0 + d * c, a.y0 + d * s, normalize_angle(a.heading)};
    }
    case MotionModel::kLaneChange: {
      const double u = std::clamp((t - a.lc_start) / a.lc_duration, 0.0, 1.0);
      const double lateral = a.lc_offset * u * u * (3.0 - 2.0 * u);
      const double lateral_rate =
          (u > 0.0 && u < 1.0) ? a.lc_offset * 6.0 * u * (1.0 - u) / a.lc_duration : 0.0;
      const double along = a.speed * t;
      return {a.x0 + along * c - lateral * s, a.y0 + along * s + lateral * c,
              normalize_angle(a.heading + std::atan2(lateral_rate, a.speed))};
    }
  }
  return {a.x0, a.y0, a.heading};
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gaussian(std::mt19937_64& rng, double mean, double sigma) {
  if (sigma <= 0.0) return mean;
  return std::normal_distribution<double>(mean, sigma)(rng);
}

Agent sample_agent(const SceneConfig& cfg, std::mt19937_64& rng, MotionModel model,
                   double max_speed) {
  Agent a;
  a.model = model;
  const double margin = 0.9 * cfg.roi;
  a.x0 = uniform(rng, -margin, margin);
  a.y0 = uniform(rng, -margin, margin);
  // Head roughly toward a random point in the ROI so most draws stay inside.
  const double tx = uniform(rng, -margin, margin);
  const double ty = uniform(rng, -margin, margin);
  a.heading = normalize_angle(std::atan2(ty - a.y0, tx - a.x0));
  a.speed = uniform(rng, cfg.min_speed, std::max(cfg.min_speed, max_speed));
  switch (model) {
    case MotionModel::kConstantTurn: {
      const double w = uniform(rng, 0.05, 0.25);
      a.turn_rate = (uniform(rng, 0.0, 1.0) < 0.5) ? -w : w;
      break;
    }
    case MotionModel::kStopAndGo: {
      double total = 0.0;
      while (total < cfg.duration) {
        const std::pair<int, double> cycle[] = {{kCruise, uniform(rng, 2.0, 6.0)},
                                                {kBrake, uniform(rng, 1.5, 3.0)},
                                                {kStop, uniform(rng, 1.0, 3.0)},
                                                {kAccelerate, uniform(rng, 1.5, 3.0)}};
        for (const auto& p : cycle) {
          a.phases.push_back(p);
          total += p.second;
        }
      }
      break;
    }
    case MotionModel::kLaneChange: {
      a.lc_offset = (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uniform(rng, 2.5, 4.0);
      a.lc_duration = uniform(rng, 3.0, 6.0);
      a.lc_start = uniform(rng, 0.0, std::max(0.0, cfg.duration - a.lc_duration));
      break;
    }
    default:
      break;
  }
  return a;
}

bool inside(const Agent& a, const SceneConfig& cfg, int frames) {
  for (int k = 0; k < frames; ++k) {
    const auto kin = evaluate(a, k / cfg.frame_hz);
    if (std::abs(kin.x) > cfg.roi || std::abs(kin.y) > cfg.roi) return false;
  }
  return true;
}

}  // namespace

void SceneConfig::validate() const {
  if (!(duration > 0.0)) throw ConfigError("scene.duration must be > 0");
  if (!(frame_hz > 0.0)) throw ConfigError("scene.frame_hz must be > 0");
  const double steps = duration * frame_hz;
  if (std::abs(steps - std::round(steps)) > 1e-9) {
    throw ConfigError("scene.duration * scene.frame_hz must be integral");
  }
  if (min_agents < 0 || max_agents < min_agents) {
    throw ConfigError("scene agent range is empty (min_agents > max_agents)");
  }
  if (!(roi > 0.0)) throw ConfigError("scene.roi must be > 0");
  double sum = 0.0;
  for (double w : motion_mix) {
    if (!(w >= 0.0)) throw ConfigError("scene.motion_mix weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("scene.motion_mix must sum to 1");
  if (!(min_speed > 0.0) || max_speed < min_speed) {
    throw ConfigError("scene speed range invalid (need 0 < min_speed <= max_speed)");
  }
}

int SceneConfig::frames() const {
  return static_cast<int>(std::llround(duration * frame_hz)) + 1;
}

void DetectorProfile::validate() const {
  if (profile_id.empty()) throw ConfigError("detector profile_id must be nonempty");
  if (pos_sigma < 0 || dim_sigma < 0 || yaw_sigma < 0 || score_model.tp_sigma < 0 ||
      score_model.fp_sigma < 0) {
    throw ConfigError("detector '" + profile_id + "': sigmas must be >= 0");
  }
  auto prob = [&](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("detector '" + profile_id + "': " + name + " must be in [0,1]");
    }
  };
  prob(miss_base, "miss_base");
  prob(score_model.tp_mean, "tp_mean");
  prob(score_model.fp_mean, "fp_mean");
  if (miss_range_coeff < 0) {
    throw ConfigError("detector '" + profile_id + "': miss_range_coeff must be >= 0");
  }
  if (fp_rate < 0) throw ConfigError("detector '" + profile_id + "': fp_rate must be >= 0");
  if (detect_hz != 2.0 && detect_hz != 10.0) {
    throw ConfigError("detector '" + profile_id + "': detect_hz must be 2 or 10");
  }
}

DetectorProfile DetectorProfile::noiseless(std::string id, double hz) {
  DetectorProfile p;
  p.profile_id = std::move(id);
  p.pos_sigma = p.dim_sigma = p.yaw_sigma = 0.0;
  p.miss_base = p.miss_range_coeff = p.fp_rate = 0.0;
  p.score_model = {0.9, 0.0, 0.3, 0.0};
  p.detect_hz = hz;
  return p;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ stream) ^ index);
}

std::string scene_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene-%06llu", static_cast<unsigned long long>(index));
  return buf;
}

std::optional<std::uint64_t> scene_index(std::string_view name) {
  constexpr std::string_view kPrefix = "scene-";
  if (name.size() < kPrefix.size() + 6 || name.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  const auto digits = name.substr(kPrefix.size());
  std::uint64_t v = 0;
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) return std::nullopt;
  if (scene_name(v) != name) return std::nullopt;
  return v;
}

std::vector<Trajectory> generate_scene(const SceneConfig& cfg, const std::string& scene_id) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const int frames = cfg.frames();
  const int n_agents = std::uniform_int_distribution<int>(cfg.min_agents, cfg.max_agents)(rng);
  std::discrete_distribution<int> pick_model(cfg.motion_mix.begin(), cfg.motion_mix.end());
  constexpr double kMinStartSeparation = 10.0;

  std::vector<Trajectory> out;
  std::vector<std::array<double, 2>> starts;
  for (int i = 0; i < n_agents; ++i) {
    const auto model = static_cast<MotionModel>(pick_model(rng));
    double max_speed = cfg.max_speed;
    Agent agent;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 0 && attempt % 50 == 0) max_speed = std::max(cfg.min_speed, 0.7 * max_speed);
      agent = sample_agent(cfg, rng, model, max_speed);
      bool separated = attempt >= 400;
      if (!separated) {
        separated = std::all_of(starts.begin(), starts.end(), [&](const auto& s) {
          return std::hypot(s[0] - agent.x0, s[1] - agent.y0) >= kMinStartSeparation;
        });
      }
      if (separated && inside(agent, cfg, frames)) break;
      if (attempt > 2000) {
        // Degenerate configs (tiny ROI): park the agent at its start point.
        agent.model = MotionModel::kStopAndGo;
        agent.speed = 0.0;
        agent.phases.clear();
        break;
      }
    }
    starts.push_back({agent.x0, agent.y0});

    const double length = std::clamp(gaussian(rng, 4.6, 0.4), 3.5, 6.0);
    const double width = std::clamp(gaussian(rng, 1.9, 0.1), 1.6, 2.3);
    const double height = std::clamp(gaussian(rng, 1.6, 0.15), 1.3, 2.2);

    Trajectory traj;
    traj.scene_id = scene_id;
    traj.track_id = i;
    traj.class_id = ObjectClass::kVehicle;
    traj.provenance = Provenance::ground_truth();
    traj.states.reserve(frames);
    for (int k = 0; k < frames; ++k) {
      const double t = k / cfg.frame_hz;
      const auto kin = evaluate(agent, t);
      TrajState st;
      st.t = t;
      st.cx = kin.x;
      st.cy = kin.y;
      st.cz = 0.5 * height;
      st.yaw = kin.yaw;
      st.length = length;
      st.width = width;
      st.height = height;
      traj.states.push_back(st);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

std::vector<DetectionFrame> gt_frames(const std::vector<Trajectory>& scene) {
  std::map<std::int64_t, DetectionFrame> by_frame;
  constexpr double kGridHz = 1000.0;
  for (const auto& traj : scene) {
    for (const auto& st : traj.states) {
      auto& frame = by_frame[frame_index(st.t, kGridHz)];
      frame.scene_id = traj.scene_id;
      frame.t = st.t;
      Box3D b;
      b.cx = st.cx;
      b.cy = st.cy;
      b.cz = st.cz;
      b.length = st.length;
      b.width = st.width;
      b.height = st.height;
      b.yaw = st.yaw;
      b.score = st.score.value_or(1.0);
      b.class_id = traj.class_id;
      b.t = st.t;
      frame.boxes.push_back(b);
    }
  }
  std::vector<DetectionFrame> out;
  out.reserve(by_frame.size());
  for (auto& [_, frame] : by_frame) out.push_back(std::move(frame));
  return out;
}

std::vector<DetectionFrame> detect(const std::vector<DetectionFrame>& gt,
                                   const DetectorProfile& profile, std::uint64_t seed,
                                   double roi) {
  profile.validate();
  const auto& sm = profile.score_model;
  std::vector<DetectionFrame> out;
  for (const auto& frame : gt) {
    const double ticks = frame.t * profile.detect_hz;
    if (std::abs(ticks - std::round(ticks)) > 1e-6) continue;
    const auto tick = static_cast<std::uint64_t>(std::llround(ticks));
    std::mt19937_64 rng(derive_seed(seed, seed_stream::kDetect, tick));

    DetectionFrame det;
    det.scene_id = frame.scene_id;
    det.t = frame.t;
    for (const auto& box : frame.boxes) {
      const double p_miss =
          std::min(1.0, profile.miss_base + profile.miss_range_coeff * std::hypot(box.cx, box.cy));
      const double u = uniform(rng, 0.0, 1.0);
      if (u < p_miss) continue;
      Box3D b = box;
      b.cx = gaussian(rng, box.cx, profile.pos_sigma);
      b.cy = gaussian(rng, box.cy, profile.pos_sigma);
      b.cz = gaussian(rng, box.cz, profile.pos_sigma);
      b.length = std::max(0.1, gaussian(rng, box.length, profile.dim_sigma));
      b.width = std::max(0.1, gaussian(rng, box.width, profile.dim_sigma));
      b.height = std::max(0.1, gaussian(rng, box.height, profile.dim_sigma));
      b.yaw = normalize_angle(gaussian(rng, box.yaw + profile.yaw_bias, profile.yaw_sigma));
      b.score = std::clamp(gaussian(rng, sm.tp_mean, sm.tp_sigma), 0.0, 1.0);
      b.t = frame.t;
      det.boxes.push_back(b);
    }
    int n_fp = 0;
    if (profile.fp_rate > 0.0) n_fp = std::poisson_distribution<int>(profile.fp_rate)(rng);
    for (int i = 0; i < n_fp; ++i) {
      Box3D b;
      b.cx = uniform(rng, -roi, roi);
      b.cy = uniform(rng, -roi, roi);
      b.length = uniform(rng, 3.5, 6.0);
      b.width = uniform(rng, 1.6, 2.3);
      b.height = uniform(rng, 1.3, 2.2);
      b.cz = 0.5 * b.height;
      b.yaw = normalize_angle(uniform(rng, -kPi, kPi));
      b.score = std::clamp(gaussian(rng, sm.fp_mean, sm.fp_sigma), 0.0, 1.0);
      b.class_id = ObjectClass::kVehicle;
      b.t = frame.t;
      det.boxes.push_back(b);
    }
    out.push_back(std::move(det));
  }
  return out;
}

}  // namespace trajforge
