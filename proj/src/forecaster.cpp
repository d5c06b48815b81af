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

#include "trajforge/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "trajforge/errors.hpp"
#include "trajforge/simulator.hpp"

namespace trajforge {
namespace {

struct Activations {
  Eigen::VectorXd x;
  Eigen::VectorXd h;
  Eigen::VectorXd raw;
};

Activations run(const ForecasterParams& p, Eigen::VectorXd x) {
  Activations a;
  a.x = std::move(x);
  a.h = (p.w1() * a.x + p.b1()).array().tanh().matrix();
  a.raw = p.w2() * a.h + p.b2();
  return a;
}

Point2 mode_point(const ForecasterParams& p, const Eigen::VectorXd& raw, int k, int j) {
  const int m = p.shape.future_len;
  const double s = static_cast<double>(j + 1) / m;
  const Eigen::Index off = static_cast<Eigen::Index>(k) * 2 * m + 2 * j;
  return {p.anchors[k][0] * s + raw(off), p.anchors[k][1] * s + raw(off + 1)};
}

std::vector<double> softmax_logits(const ForecasterParams& p, const Eigen::VectorXd& raw) {
  const int k_modes = p.shape.modes;
  const Eigen::Index off = static_cast<Eigen::Index>(k_modes) * 2 * p.shape.future_len;
  double mx = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < k_modes; ++k) mx = std::max(mx, raw(off + k));
  std::vector<double> e(k_modes);
  double sum = 0.0;
  for (int k = 0; k < k_modes; ++k) {
    e[k] = std::exp(raw(off + k) - mx);
    sum += e[k];
  }
  for (double& v : e) v /= sum;
  return e;
}

ForecastOutput decode(const ForecasterParams& p, const Eigen::VectorXd& raw) {
  ForecastOutput out;
  out.modes.resize(p.shape.modes);
  for (int k = 0; k < p.shape.modes; ++k) {
    out.modes[k].reserve(p.shape.future_len);
    for (int j = 0; j < p.shape.future_len; ++j) out.modes[k].push_back(mode_point(p, raw, k, j));
  }
  out.confidences = softmax_logits(p, raw);
  return out;
}

}  // namespace

std::size_t ForecasterShape::param_count() const {
  const std::size_t d = input_dim();
  const std::size_t h = hidden;
  const std::size_t o = output_dim();
  return h * d + h + o * h + o;
}

Eigen::Map<const ForecasterParams::RowMajor> ForecasterParams::w1() const {
  return {theta.data(), shape.hidden, shape.input_dim()};
}

Eigen::Map<const Eigen::VectorXd> ForecasterParams::b1() const {
  return {theta.data() + static_cast<Eigen::Index>(shape.hidden) * shape.input_dim(), shape.hidden};
}

Eigen::Map<const ForecasterParams::RowMajor> ForecasterParams::w2() const {
  const Eigen::Index off = static_cast<Eigen::Index>(shape.hidden) * (shape.input_dim() + 1);
  return {theta.data() + off, shape.output_dim(), shape.hidden};
}

Eigen::Map<const Eigen::VectorXd> ForecasterParams::b2() const {
  const Eigen::Index off = static_cast<Eigen::Index>(shape.hidden) * (shape.input_dim() + 1) +
                           static_cast<Eigen::Index>(shape.output_dim()) * shape.hidden;
  return {theta.data() + off, shape.output_dim()};
}

ForecasterParams ForecasterParams::initialize(const ForecasterShape& shape,
                                              std::vector<Point2> anchors, std::uint64_t seed) {
  ForecasterParams p;
  p.shape = shape;
  p.anchors = std::move(anchors);
  p.theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape.param_count()));
  std::mt19937_64 rng(derive_seed(seed, seed_stream::kInit, 0));
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(shape.input_dim())));
  const Eigen::Index n_w1 = static_cast<Eigen::Index>(shape.hidden) * shape.input_dim();
  for (Eigen::Index i = 0; i < n_w1; ++i) p.theta(i) = normal(rng);
  p.validate();
  return p;
}

void ForecasterParams::validate() const {
  if (shape.past_len < 1 || shape.future_len < 1 || shape.hidden < 1 || shape.modes < 1) {
    throw InputError("forecaster shape entries must be >= 1");
  }
  if (static_cast<std::size_t>(theta.size()) != shape.param_count()) {
    throw InputError("forecaster parameter count " + std::to_string(theta.size()) +
                     " does not match shape (" + std::to_string(shape.param_count()) + ")");
  }
  if (!theta.allFinite()) throw InputError("forecaster parameters contain a non-finite value");
  if (anchors.size() != static_cast<std::size_t>(shape.modes)) {
    throw InputError("forecaster needs exactly K anchors");
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (!std::isfinite(anchors[i][0]) || !std::isfinite(anchors[i][1])) {
      throw InputError("forecaster anchor is not finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (anchors[i] == anchors[j]) throw InputError("forecaster anchors must be pairwise distinct");
    }
  }
}

Eigen::VectorXd featurize(const ForecastSample& sample, double sample_hz) {
  const int n_disp = static_cast<int>(sample.past.size()) - 1;
  Eigen::VectorXd x(2 * n_disp + 3);
  for (int i = 0; i < n_disp; ++i) {
    x(2 * i) = sample.past[i + 1][0] - sample.past[i][0];
    x(2 * i + 1) = sample.past[i + 1][1] - sample.past[i][1];
  }
  if (n_disp == 0) {
    x(0) = 0.0;
    x(1) = 1.0;
    x(2) = 0.0;
    return x;
  }
  const double lx = x(2 * n_disp - 2);
  const double ly = x(2 * n_disp - 1);
  x(2 * n_disp) = std::hypot(lx, ly) * sample_hz;
  double sx = 0.0;
  double sy = 0.0;
  for (int i = std::max(0, n_disp - 3); i < n_disp; ++i) {
    sx += x(2 * i);
    sy += x(2 * i + 1);
  }
  const double norm = std::hypot(sx, sy);
  x(2 * n_disp + 1) = norm > 0.0 ? sx / norm : 1.0;
  x(2 * n_disp + 2) = norm > 0.0 ? sy / norm : 0.0;
  return x;
}

ForecastOutput forward_features(const ForecasterParams& params, const Eigen::VectorXd& x) {
  if (x.size() != params.shape.input_dim()) throw InputError("feature size does not match forecaster");
  return decode(params, run(params, x).raw);
}

ForecastOutput forward(const ForecasterParams& params, const ForecastSample& sample) {
  if (!params.theta.allFinite()) throw InputError("forecaster parameters contain a non-finite value");
  return forward_features(params, featurize(sample));
}

double average_displacement(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double dx = a[j][0] - b[j][0];
    const double dy = a[j][1] - b[j][1];
    sum += std::sqrt(dx * dx + dy * dy);
  }
  return sum / static_cast<double>(a.size());
}

LossBreakdown loss_and_grad(const ForecasterParams& params,
                            std::span<const ForecastSample* const> batch,
                            const LossOptions& opts, Eigen::VectorXd* grad) {
  if (batch.empty()) throw InputError("loss_and_grad: empty batch");
  const ForecasterShape& sh = params.shape;
  const int m = sh.future_len;
  const int k_modes = sh.modes;
  const Eigen::Index hdim = sh.hidden;
  const Eigen::Index ddim = sh.input_dim();
  const Eigen::Index logit_off = static_cast<Eigen::Index>(k_modes) * 2 * m;
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  Eigen::Map<ForecasterParams::RowMajor> gw1(nullptr, 0, 0);
  Eigen::Map<Eigen::VectorXd> gb1(nullptr, 0);
  Eigen::Map<ForecasterParams::RowMajor> gw2(nullptr, 0, 0);
  Eigen::Map<Eigen::VectorXd> gb2(nullptr, 0);
  if (grad != nullptr) {
    grad->setZero(static_cast<Eigen::Index>(sh.param_count()));
    double* base = grad->data();
    new (&gw1) Eigen::Map<ForecasterParams::RowMajor>(base, hdim, ddim);
    new (&gb1) Eigen::Map<Eigen::VectorXd>(base + hdim * ddim, hdim);
    new (&gw2) Eigen::Map<ForecasterParams::RowMajor>(base + hdim * (ddim + 1), sh.output_dim(), hdim);
    new (&gb2) Eigen::Map<Eigen::VectorXd>(base + hdim * (ddim + 1) + sh.output_dim() * hdim,
                                           sh.output_dim());
  }

  LossBreakdown loss;
  Eigen::VectorXd g_res(2 * m);
  Eigen::VectorXd g_logit(k_modes);
  for (const ForecastSample* sample : batch) {
    if (static_cast<int>(sample->future.size()) != m) {
      throw InputError("loss_and_grad: sample future length does not match forecaster");
    }
    const Activations act = run(params, featurize(*sample));
    int winner = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_modes; ++k) {
      double sum = 0.0;
      for (int j = 0; j < m; ++j) {
        const Point2 p = mode_point(params, act.raw, k, j);
        const double dx = p[0] - sample->future[j][0];
        const double dy = p[1] - sample->future[j][1];
        sum += std::sqrt(dx * dx + dy * dy);
      }
      const double ade = sum / m;
      if (ade < best) {
        best = ade;
        winner = k;
      }
    }
    const std::vector<double> conf = softmax_logits(params, act.raw);
    loss.ade_term += best * inv_b;
    loss.conf_term += -std::log(conf[winner]) * inv_b;
    if (grad == nullptr) continue;

    for (int j = 0; j < m; ++j) {
      const Point2 p = mode_point(params, act.raw, winner, j);
      const double dx = p[0] - sample->future[j][0];
      const double dy = p[1] - sample->future[j][1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      const double scale = dist > 0.0 ? inv_b / (m * dist) : 0.0;
      g_res(2 * j) = dx * scale;
      g_res(2 * j + 1) = dy * scale;
    }
    for (int k = 0; k < k_modes; ++k) {
      g_logit(k) = opts.conf_weight * inv_b * (conf[k] - (k == winner ? 1.0 : 0.0));
    }
    const Eigen::Index res_off = static_cast<Eigen::Index>(winner) * 2 * m;
    gb2.segment(res_off, 2 * m) += g_res;
    gb2.segment(logit_off, k_modes) += g_logit;
    gw2.middleRows(res_off, 2 * m).noalias() += g_res * act.h.transpose();
    gw2.middleRows(logit_off, k_modes).noalias() += g_logit * act.h.transpose();
    Eigen::VectorXd gh = params.w2().middleRows(res_off, 2 * m).transpose() * g_res;
    gh.noalias() += params.w2().middleRows(logit_off, k_modes).transpose() * g_logit;
    const Eigen::VectorXd gz = gh.cwiseProduct((1.0 - act.h.array().square()).matrix());
    gb1 += gz;
    gw1.noalias() += gz * act.x.transpose();
  }
  loss.total = loss.ade_term + opts.conf_weight * loss.conf_term;
  return loss;
}

LossBreakdown loss_and_grad(const ForecasterParams& params,
                            const std::vector<ForecastSample>& batch, const LossOptions& opts,
                            Eigen::VectorXd* grad) {
  std::vector<const ForecastSample*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& s : batch) ptrs.push_back(&s);
  return loss_and_grad(params, std::span<const ForecastSample* const>(ptrs), opts, grad);
}

std::vector<Point2> radial_anchor_grid(int modes) {
  constexpr double kHeadings[] = {0.0, kPi / 6.0, -kPi / 6.0};
  std::vector<Point2> out;
  for (int k = 0; k < modes; ++k) {
    const double radius = 5.0 * std::pow(4.0, k / 3);
    const double h = kHeadings[k % 3];
    out.push_back({radius * std::cos(h), radius * std::sin(h)});
  }
  return out;
}

std::vector<Point2> fit_anchors(const std::vector<ForecastSample>& samples, int modes,
                                std::uint64_t seed) {
  if (samples.empty()) throw InputError("fit_anchors: no samples");
  if (modes < 1) throw InputError("fit_anchors: K must be >= 1");
  std::vector<Point2> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.future.empty()) throw InputError("fit_anchors: sample without future");
    pts.push_back(s.future.back());
  }
  std::vector<Point2> distinct = pts;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < static_cast<std::size_t>(modes)) return radial_anchor_grid(modes);

  auto sq = [](const Point2& a, const Point2& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
  };
  std::mt19937_64 rng(derive_seed(seed, seed_stream::kAnchors, 0));
  std::vector<Point2> centers;
  centers.push_back(pts[std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng)]);
  std::vector<double> d2(pts.size());
  while (centers.size() < static_cast<std::size_t>(modes)) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, sq(pts[i], c));
      d2[i] = best;
    }
    std::discrete_distribution<std::size_t> pick(d2.begin(), d2.end());
    centers.push_back(pts[pick(rng)]);
  }

  std::vector<std::size_t> label(pts.size());
  for (int iter = 0; iter < 50; ++iter) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::size_t arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = sq(pts[i], centers[c]);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      label[i] = arg;
    }
    std::vector<Point2> sum(centers.size(), {0.0, 0.0});
    std::vector<std::size_t> count(centers.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sum[label[i]][0] += pts[i][0];
      sum[label[i]][1] += pts[i][1];
      ++count[label[i]];
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (count[c] > 0) {
        centers[c] = {sum[c][0] / static_cast<double>(count[c]),
                      sum[c][1] / static_cast<double>(count[c])};
      }
    }
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (centers[i] == centers[j]) return radial_anchor_grid(modes);
    }
  }
  return centers;
}

}  // namespace trajforge
