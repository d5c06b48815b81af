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

#include "trajforge/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "trajforge/errors.hpp"

namespace trajforge {
namespace {

using Point = std::array<double, 2>;
using Polygon = std::vector<Point>;

constexpr std::array<std::string_view, 11> kClassNames = {
    "REGULAR_VEHICLE", "LARGE_VEHICLE", "BUS",        "BOX_TRUCK",
    "TRUCK",           "VEHICULAR_TRAILER", "SCHOOL_BUS", "ARTICULATED_BUS",
    "VEHICLE",         "PEDESTRIAN",    "CYCLIST"};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double polygon_area(const Polygon& poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(twice);
}

// Sutherland-Hodgman: clip `subject` against the convex CCW polygon `clip`.
Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  for (std::size_t e = 0; e < clip.size() && !out.empty(); ++e) {
    const Point& a = clip[e];
    const Point& b = clip[(e + 1) % clip.size()];
    Polygon in;
    in.swap(out);
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Point& cur = in[i];
      const Point& prev = in[(i + in.size() - 1) % in.size()];
      const double dc = cross(a, b, cur);
      const double dp = cross(a, b, prev);
      const bool cur_in = dc >= 0.0;
      const bool prev_in = dp >= 0.0;
      if (cur_in != prev_in) {
        const double s = dp / (dp - dc);
        out.push_back({prev[0] + s * (cur[0] - prev[0]), prev[1] + s * (cur[1] - prev[1])});
      }
      if (cur_in) out.push_back(cur);
    }
  }
  return out;
}

double lerp(double a, double b, double s) { return a + s * (b - a); }

}  // namespace

std::string_view class_name(ObjectClass c) {
  return kClassNames.at(static_cast<std::size_t>(c));
}

ObjectClass class_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i) {
    if (kClassNames[i] == name) return static_cast<ObjectClass>(i);
  }
  throw InputError("unknown object class '" + std::string(name) + "'");
}

bool is_vehicle(ObjectClass c) {
  return static_cast<int>(c) <= static_cast<int>(ObjectClass::kVehicle);
}

std::string Provenance::to_string() const {
  return kind == Kind::kGroundTruth ? std::string("gt") : "pseudo:" + detector_profile;
}

Provenance Provenance::parse(std::string_view text) {
  if (text == "gt") return ground_truth();
  constexpr std::string_view kPrefix = "pseudo:";
  if (text.substr(0, kPrefix.size()) == kPrefix) {
    return pseudo(std::string(text.substr(kPrefix.size())));
  }
  throw InputError("invalid provenance '" + std::string(text) + "'");
}

double normalize_angle(double a) {
  double r = std::fmod(a + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

std::array<std::array<double, 2>, 4> footprint(const Box3D& b) {
  const double c = std::cos(b.yaw);
  const double s = std::sin(b.yaw);
  const double hl = 0.5 * b.length;
  const double hw = 0.5 * b.width;
  constexpr std::array<std::array<double, 2>, 4> kSigns = {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  std::array<std::array<double, 2>, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double lx = kSigns[i][0] * hl;
    const double ly = kSigns[i][1] * hw;
    out[i] = {b.cx + c * lx - s * ly, b.cy + s * lx + c * ly};
  }
  return out;
}

double bev_iou(const Box3D& a, const Box3D& b) {
  if (a.cx == b.cx && a.cy == b.cy && a.length == b.length && a.width == b.width &&
      normalize_angle(a.yaw) == normalize_angle(b.yaw)) {
    return 1.0;
  }
  const auto fa = footprint(a);
  const auto fb = footprint(b);
  const Polygon pa(fa.begin(), fa.end());
  const Polygon pb(fb.begin(), fb.end());
  const double inter = polygon_area(clip_convex(pa, pb));
  const double uni = a.length * a.width + b.length * b.width - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_distance(double ax, double ay, double bx, double by) {
  return std::hypot(ax - bx, ay - by);
}

std::int64_t frame_index(double t, double hz) { return std::llround(t * hz); }

void validate_trajectory(const Trajectory& traj) {
  if (traj.states.size() < 2) throw InputError("too-short trajectory");
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    if (!(traj.states[i].t > traj.states[i - 1].t)) {
      throw InputError("trajectory timestamps not strictly increasing (track " +
                       std::to_string(traj.track_id) + ")");
    }
  }
}

TrajState interpolate_state(const std::vector<TrajState>& states, double t) {
  auto it = std::lower_bound(states.begin(), states.end(), t,
                             [](const TrajState& s, double v) { return s.t < v; });
  if (it == states.end()) return states.back();
  if (it->t == t || it == states.begin()) return *it;
  const TrajState& hi = *it;
  const TrajState& lo = *(it - 1);
  const double s = (t - lo.t) / (hi.t - lo.t);
  TrajState out;
  out.t = t;
  out.cx = lerp(lo.cx, hi.cx, s);
  out.cy = lerp(lo.cy, hi.cy, s);
  out.cz = lerp(lo.cz, hi.cz, s);
  out.length = lerp(lo.length, hi.length, s);
  out.width = lerp(lo.width, hi.width, s);
  out.height = lerp(lo.height, hi.height, s);
  out.yaw = normalize_angle(lo.yaw + s * normalize_angle(hi.yaw - lo.yaw));
  if (lo.score && hi.score) out.score = lerp(*lo.score, *hi.score, s);
  return out;
}

Trajectory resample_linear(const Trajectory& traj, double target_hz) {
  validate_trajectory(traj);
  if (!(target_hz > 0.0)) throw InputError("target rate must be positive");
  const double step = 1.0 / target_hz;
  const auto& src = traj.states;
  const double t0 = src.front().t;
  const double span = src.back().t - t0;
  constexpr double kSnap = 1e-6;
  const auto n = static_cast<std::size_t>(std::floor(span * target_hz + kSnap)) + 1;

  Trajectory out = traj;
  out.states.clear();
  out.states.reserve(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * step;
    while (seg + 1 < src.size() && src[seg + 1].t <= t + kSnap * step) ++seg;
    if (std::abs(src[seg].t - t) <= kSnap * step) {
      out.states.push_back(src[seg]);
      continue;
    }
    const TrajState& lo = src[seg];
    const TrajState& hi = src[std::min(seg + 1, src.size() - 1)];
    const double s = (t - lo.t) / (hi.t - lo.t);
    TrajState st;
    st.t = t;
    st.cx = lerp(lo.cx, hi.cx, s);
    st.cy = lerp(lo.cy, hi.cy, s);
    st.cz = lerp(lo.cz, hi.cz, s);
    st.length = lerp(lo.length, hi.length, s);
    st.width = lerp(lo.width, hi.width, s);
    st.height = lerp(lo.height, hi.height, s);
    st.yaw = normalize_angle(lo.yaw + s * normalize_angle(hi.yaw - lo.yaw));
    if (lo.score && hi.score) st.score = lerp(*lo.score, *hi.score, s);
    out.states.push_back(st);
  }
  return out;
}

}  // namespace trajforge
