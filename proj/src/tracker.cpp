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

#include "trajforge/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trajforge/errors.hpp"
#include "trajforge/hungarian.hpp"

namespace trajforge {
namespace {

using Measurement = Eigen::Matrix<double, 4, 1>;
using MeasurementCov = Eigen::Matrix<double, 4, 4>;
using Observation = Eigen::Matrix<double, 4, 6>;

Observation observation_model() {
  Observation h = Observation::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

TrajState state_of(const KalmanTrack& track, double t) {
  TrajState st;
  st.t = t;
  st.cx = track.mean(0);
  st.cy = track.mean(1);
  st.cz = track.mean(2);
  st.yaw = track.mean(3);
  st.length = track.length;
  st.width = track.width;
  st.height = track.height;
  st.score = track.last_score;
  return st;
}

}  // namespace

void TrackerConfig::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string("tracker.") + name + " must be in [0,1]");
  };
  unit(nms_score_threshold, "nms_score_threshold");
  unit(nms_iou_threshold, "nms_iou_threshold");
  unit(dims_ema_alpha, "dims_ema_alpha");
  if (!(gate_center_distance > 0.0)) throw ConfigError("tracker.gate_center_distance must be > 0");
  if (min_hits < 1) throw ConfigError("tracker.min_hits must be >= 1");
  if (max_age < 0) throw ConfigError("tracker.max_age must be >= 0");
  for (double q : process_noise_q) {
    if (!(q >= 0.0)) throw ConfigError("tracker.process_noise_q entries must be >= 0");
  }
  for (double r : measurement_noise_r) {
    if (!(r > 0.0)) throw ConfigError("tracker.measurement_noise_r entries must be > 0");
  }
  if (!(initial_velocity_variance > 0.0)) {
    throw ConfigError("tracker.initial_velocity_variance must be > 0");
  }
  if (!(birth_speed_gate >= 0.0)) throw ConfigError("tracker.birth_speed_gate must be >= 0");
  if (!(output_hz > 0.0)) throw ConfigError("tracker.output_hz must be > 0");
}

TrackerConfig match_measurement_noise(TrackerConfig base, const DetectorProfile& profile) {
  constexpr double kFloor = 1e-12;
  const double pos = std::max(kFloor, profile.pos_sigma * profile.pos_sigma);
  base.measurement_noise_r = {pos, pos, pos,
                              std::max(kFloor, profile.yaw_sigma * profile.yaw_sigma)};
  return base;
}

Box3D KalmanTrack::predicted_box() const {
  Box3D b;
  b.cx = mean(0);
  b.cy = mean(1);
  b.cz = mean(2);
  b.yaw = normalize_angle(mean(3));
  b.length = length;
  b.width = width;
  b.height = height;
  b.score = last_score;
  b.class_id = class_id;
  return b;
}

DetectionFrame nms(const DetectionFrame& frame, const TrackerConfig& cfg) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < frame.boxes.size(); ++i) {
    if (frame.boxes[i].score >= cfg.nms_score_threshold) order.push_back(i);
  }
  // Ties in score fall back to geometry so the result does not depend on the
  // input order.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Box3D& x = frame.boxes[a];
    const Box3D& y = frame.boxes[b];
    if (x.score != y.score) return x.score > y.score;
    if (x.cx != y.cx) return x.cx < y.cx;
    if (x.cy != y.cy) return x.cy < y.cy;
    return a < b;
  });
  DetectionFrame out;
  out.scene_id = frame.scene_id;
  out.t = frame.t;
  for (std::size_t idx : order) {
    const Box3D& cand = frame.boxes[idx];
    const bool suppressed = std::any_of(out.boxes.begin(), out.boxes.end(), [&](const Box3D& kept) {
      return kept.class_id == cand.class_id && bev_iou(kept, cand) > cfg.nms_iou_threshold;
    });
    if (!suppressed) out.boxes.push_back(cand);
  }
  return out;
}

KalmanTrack init_track(const Box3D& det, std::int64_t track_id, const TrackerConfig& cfg) {
  KalmanTrack tr;
  tr.track_id = track_id;
  tr.class_id = det.class_id;
  tr.mean << det.cx, det.cy, det.cz, normalize_angle(det.yaw), 0.0, 0.0;
  tr.cov.setZero();
  for (int i = 0; i < 4; ++i) tr.cov(i, i) = cfg.measurement_noise_r[i];
  tr.cov(4, 4) = tr.cov(5, 5) = cfg.initial_velocity_variance;
  tr.length = det.length;
  tr.width = det.width;
  tr.height = det.height;
  tr.hits = 1;
  tr.age_since_update = 0;
  tr.last_score = det.score;
  tr.history.push_back(state_of(tr, det.t));
  return tr;
}

KalmanTrack kalman_predict(const KalmanTrack& track, double dt, const TrackerConfig& cfg) {
  if (!(dt > 0.0)) throw InputError("kalman_predict requires dt > 0");
  KalmanTrack out = track;
  KalmanTrack::Covariance f = KalmanTrack::Covariance::Identity();
  f(0, 4) = dt;
  f(1, 5) = dt;
  out.mean = f * track.mean;
  out.cov = f * track.cov * f.transpose();
  for (int i = 0; i < 6; ++i) out.cov(i, i) += cfg.process_noise_q[i];
  out.age_since_update = track.age_since_update + 1;
  return out;
}

KalmanTrack kalman_update(const KalmanTrack& track, const Box3D& det, const TrackerConfig& cfg) {
  KalmanTrack out = track;
  const Observation h = observation_model();
  MeasurementCov r = MeasurementCov::Zero();
  for (int i = 0; i < 4; ++i) r(i, i) = cfg.measurement_noise_r[i];

  Measurement z;
  z << det.cx, det.cy, det.cz, det.yaw;
  Measurement innovation = z - h * track.mean;
  innovation(3) = normalize_angle(innovation(3));

  const MeasurementCov s = h * track.cov * h.transpose() + r;
  // K = P H^T S^-1, via a solve on the symmetric S.
  const Eigen::Matrix<double, 6, 4> gain =
      s.ldlt().solve(h * track.cov.transpose()).transpose();
  out.mean = track.mean + gain * innovation;
  out.mean(3) = normalize_angle(out.mean(3));
  const KalmanTrack::Covariance i_kh = KalmanTrack::Covariance::Identity() - gain * h;
  // Joseph form keeps the covariance symmetric positive-definite.
  out.cov = i_kh * track.cov * i_kh.transpose() + gain * r * gain.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose());

  const double a = cfg.dims_ema_alpha;
  out.length = (1.0 - a) * track.length + a * det.length;
  out.width = (1.0 - a) * track.width + a * det.width;
  out.height = (1.0 - a) * track.height + a * det.height;
  out.hits = track.hits + 1;
  out.age_since_update = 0;
  out.last_score = det.score;
  out.history.push_back(state_of(out, det.t));
  return out;
}

std::vector<Trajectory> track_sequence(const std::vector<DetectionFrame>& frames,
                                       const TrackerConfig& cfg, const std::string& profile_id) {
  cfg.validate();
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!(frames[i].t > frames[i - 1].t)) {
      throw InputError("detection frames not sorted by strictly increasing t (frame " +
                       std::to_string(i) + ")");
    }
    if (frames[i].scene_id != frames[0].scene_id) {
      throw InputError("track_sequence received frames from several scenes");
    }
  }

  std::vector<KalmanTrack> live;
  std::vector<KalmanTrack> finished;
  std::int64_t next_id = 0;
  double prev_t = 0.0;

  for (std::size_t f = 0; f < frames.size(); ++f) {
    const DetectionFrame dets = nms(frames[f], cfg);
    const double dt = f == 0 ? 0.0 : dets.t - prev_t;
    prev_t = dets.t;
    if (f > 0) {
      for (auto& tr : live) tr = kalman_predict(tr, dt, cfg);
    }

    const std::size_t n_tracks = live.size();
    const std::size_t n_dets = dets.boxes.size();
    std::vector<char> det_used(n_dets, 0);
    if (n_tracks > 0 && n_dets > 0) {
      CostMatrix cost(n_tracks, n_dets);
      std::vector<char> allowed(n_tracks * n_dets, 0);
      for (std::size_t i = 0; i < n_tracks; ++i) {
        const Box3D pred = live[i].predicted_box();
        const double gate = live[i].hits == 1
                                ? std::max(cfg.gate_center_distance, cfg.birth_speed_gate * dt)
                                : cfg.gate_center_distance;
        for (std::size_t j = 0; j < n_dets; ++j) {
          const Box3D& d = dets.boxes[j];
          if (d.class_id != live[i].class_id) continue;
          const double dist = center_distance(pred, d);
          if (dist > gate) continue;
          cost(i, j) = cfg.association_cost == AssociationCost::kCenterDistance
                           ? dist
                           : -bev_iou(pred, d);
          allowed[i * n_dets + j] = 1;
        }
      }
      for (const auto& [i, j] : hungarian_gated(std::move(cost), allowed).pairs) {
        live[i] = kalman_update(live[i], dets.boxes[j], cfg);
        det_used[j] = 1;
      }
    }

    for (std::size_t j = 0; j < n_dets; ++j) {
      if (!det_used[j]) live.push_back(init_track(dets.boxes[j], next_id++, cfg));
    }

    std::vector<KalmanTrack> keep;
    keep.reserve(live.size());
    for (auto& tr : live) {
      if (tr.age_since_update > cfg.max_age) {
        finished.push_back(std::move(tr));
      } else {
        keep.push_back(std::move(tr));
      }
    }
    live.swap(keep);
  }
  for (auto& tr : live) finished.push_back(std::move(tr));
  std::sort(finished.begin(), finished.end(),
            [](const KalmanTrack& a, const KalmanTrack& b) { return a.track_id < b.track_id; });

  std::vector<Trajectory> out;
  const std::string scene = frames.empty() ? std::string() : frames.front().scene_id;
  for (const auto& tr : finished) {
    if (tr.hits < cfg.min_hits || tr.history.size() < 2) continue;
    Trajectory traj;
    traj.scene_id = scene;
    traj.track_id = tr.track_id;
    traj.class_id = tr.class_id;
    traj.provenance = Provenance::pseudo(profile_id);
    traj.states = tr.history;
    out.push_back(resample_linear(traj, cfg.output_hz));
  }
  return out;
}

}  // namespace trajforge
