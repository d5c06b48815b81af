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

#include "trajforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "trajforge/errors.hpp"
#include "trajforge/hungarian.hpp"

namespace trajforge {
namespace {

double dist(const Point2& a, const Point2& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

// A window in world coordinates, keyed by its scene and anchor frame.
struct WorldWindow {
  std::vector<Point2> past;
  std::vector<Point2> future;
};

using WindowKey = std::pair<std::string, std::int64_t>;

std::map<WindowKey, std::vector<WorldWindow>> world_windows(const std::vector<Trajectory>& trajs,
                                                            const WindowConfig& cfg) {
  std::map<WindowKey, std::vector<WorldWindow>> out;
  const double dt = 1.0 / cfg.sample_hz;
  for (const auto& traj : trajs) {
    if (!cfg.allowed_classes.contains(traj.class_id)) continue;
    const auto& st = traj.states;
    for (std::size_t i = 1; i < st.size(); ++i) {
      if (std::abs(st[i].t - st[i - 1].t - dt) > 1e-6) {
        throw InputError("trajectory " + traj.scene_id + "/" + std::to_string(traj.track_id) +
                         " is not uniformly sampled");
      }
    }
    if (st.size() < static_cast<std::size_t>(cfg.window_size())) continue;
    const std::size_t last = st.size() - 1 - static_cast<std::size_t>(cfg.future_len);
    for (std::size_t a = cfg.past_len; a <= last; ++a) {
      const std::int64_t frame = frame_index(st[a].t, cfg.sample_hz);
      if (frame % cfg.stride != 0) continue;
      WorldWindow w;
      for (std::size_t i = a - cfg.past_len; i <= a; ++i) w.past.push_back({st[i].cx, st[i].cy});
      for (std::size_t i = a + 1; i <= a + static_cast<std::size_t>(cfg.future_len); ++i) {
        w.future.push_back({st[i].cx, st[i].cy});
      }
      out[{traj.scene_id, frame}].push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace

void MetricsConfig::validate() const {
  if (k < 1) throw ConfigError("metrics.k must be >= 1");
  if (!(miss_threshold > 0.0)) throw ConfigError("metrics.miss_threshold must be > 0");
  if (!(match_threshold > 0.0)) throw ConfigError("metrics.match_threshold must be > 0");
}

SampleMetrics eval_sample(const ForecastOutput& output, const std::vector<Point2>& gt_future,
                          const MetricsConfig& cfg) {
  if (output.modes.size() < static_cast<std::size_t>(cfg.k) ||
      output.confidences.size() < static_cast<std::size_t>(cfg.k)) {
    throw InputError("eval_sample: output has fewer than k modes");
  }
  if (gt_future.empty()) throw InputError("eval_sample: empty ground-truth future");
  SampleMetrics r;
  r.min_ade = std::numeric_limits<double>::infinity();
  r.min_fde = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.k; ++k) {
    const auto& mode = output.modes[k];
    if (mode.size() != gt_future.size()) {
      throw InputError("eval_sample: predicted horizon " + std::to_string(mode.size()) +
                       " does not match ground truth " + std::to_string(gt_future.size()));
    }
    r.min_ade = std::min(r.min_ade, average_displacement(mode, gt_future));
    const double fde = dist(mode.back(), gt_future.back());
    if (fde < r.min_fde) {
      r.min_fde = fde;
      r.best_mode = k;
    }
  }
  const double miss_conf = 1.0 - output.confidences[r.best_mode];
  r.brier_fde = r.min_fde + miss_conf * miss_conf;
  r.miss = r.min_fde > cfg.miss_threshold;
  return r;
}

MetricsReport eval_set(const std::vector<SampleMetrics>& records) {
  if (records.empty()) throw InputError("eval_set: no samples");
  MetricsReport rep;
  rep.n_samples = records.size();
  std::size_t misses = 0;
  for (const auto& r : records) {
    rep.min_ade += r.min_ade;
    rep.min_fde += r.min_fde;
    rep.brier_fde += r.brier_fde;
    misses += r.miss ? 1 : 0;
  }
  const double n = static_cast<double>(records.size());
  rep.min_ade /= n;
  rep.min_fde /= n;
  rep.brier_fde /= n;
  rep.miss_rate = static_cast<double>(misses) / n;
  return rep;
}

MetricsReport eval_set(const std::vector<ForecastOutput>& outputs,
                       const std::vector<std::vector<Point2>>& gt_futures, const MetricsConfig& cfg) {
  if (outputs.size() != gt_futures.size()) throw InputError("eval_set: outputs/gt size mismatch");
  std::vector<SampleMetrics> records;
  records.reserve(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    records.push_back(eval_sample(outputs[i], gt_futures[i], cfg));
  }
  return eval_set(records);
}

MetricsReport evaluate(const ForecasterParams& params, const SampleSet& set, const MetricsConfig& cfg) {
  params.validate();
  std::vector<SampleMetrics> records;
  records.reserve(set.size());
  for (const auto& s : set.samples) {
    records.push_back(eval_sample(forward_features(params, featurize(s)), s.future, cfg));
  }
  return eval_set(records);
}

QualityReport assess_pseudo_quality(const std::vector<Trajectory>& pseudo,
                                    const std::vector<Trajectory>& gt, const WindowConfig& wcfg,
                                    const MetricsConfig& mcfg) {
  wcfg.validate();
  mcfg.validate();
  const auto gt_windows = world_windows(gt, wcfg);
  const auto pseudo_windows = world_windows(pseudo, wcfg);
  QualityReport rep;
  for (const auto& [_, ws] : gt_windows) rep.n_gt_windows += ws.size();
  for (const auto& [_, ws] : pseudo_windows) rep.n_pseudo_windows += ws.size();

  MetricsConfig single = mcfg;
  single.k = 1;
  std::vector<SampleMetrics> records;
  for (const auto& [key, gws] : gt_windows) {
    const auto it = pseudo_windows.find(key);
    if (it == pseudo_windows.end()) continue;
    const auto& pws = it->second;
    CostMatrix cost(pws.size(), gws.size());
    std::vector<char> allowed(pws.size() * gws.size(), 0);
    for (std::size_t i = 0; i < pws.size(); ++i) {
      for (std::size_t j = 0; j < gws.size(); ++j) {
        double c = 0.0;
        if (mcfg.quality_match_cost == QualityMatchCost::kMeanPast) {
          for (std::size_t p = 0; p < gws[j].past.size(); ++p) c += dist(pws[i].past[p], gws[j].past[p]);
          c /= static_cast<double>(gws[j].past.size());
        } else {
          c = dist(pws[i].past.back(), gws[j].past.back());
        }
        cost(i, j) = c;
        allowed[i * gws.size() + j] = c <= mcfg.match_threshold ? 1 : 0;
      }
    }
    for (const auto& [i, j] : hungarian_gated(std::move(cost), allowed).pairs) {
      ForecastOutput single_mode;
      single_mode.modes = {pws[i].future};
      single_mode.confidences = {1.0};
      records.push_back(eval_sample(single_mode, gws[j].future, single));
    }
  }
  rep.n_matched = records.size();
  rep.match_rate = rep.n_gt_windows == 0
                       ? 0.0
                       : static_cast<double>(rep.n_matched) / static_cast<double>(rep.n_gt_windows);
  rep.empty = records.empty();
  if (!records.empty()) rep.metrics = eval_set(records);
  return rep;
}

double average_precision(const std::vector<bool>& is_tp_by_rank, std::size_t n_gt) {
  if (n_gt == 0) throw InputError("average_precision: no ground truth");
  const std::size_t n = is_tp_by_rank.size();
  std::vector<double> precision(n);
  std::vector<double> recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += is_tp_by_rank[i] ? 1 : 0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(n_gt);
  }
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

E2EReport map_f(const std::vector<E2EPrediction>& preds, const std::vector<E2EGroundTruth>& gt,
                const MetricsConfig& cfg) {
  if (gt.empty()) throw InputError("map_f: empty ground truth");
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].first_frame.score > preds[b].first_frame.score;
  });

  std::vector<char> gt_taken(gt.size(), 0);
  std::vector<bool> tp_by_rank;
  tp_by_rank.reserve(preds.size());
  E2EReport rep;
  for (std::size_t idx : order) {
    const E2EPrediction& p = preds[idx];
    std::size_t best = gt.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (gt_taken[g] || gt[g].group != p.group) continue;
      const double d = dist({p.first_frame.cx, p.first_frame.cy}, gt[g].first_frame);
      if (d <= cfg.match_threshold && d < best_d) {
        best_d = d;
        best = g;
      }
    }
    bool tp = false;
    if (best < gt.size()) {
      gt_taken[best] = 1;
      const SampleMetrics m = eval_sample(p.forecast, gt[best].future, cfg);
      tp = m.min_fde <= cfg.miss_threshold;
      if (tp) {
        rep.matched_min_ade += m.min_ade;
        rep.matched_min_fde += m.min_fde;
      }
    }
    tp_by_rank.push_back(tp);
    if (tp) {
      ++rep.n_true_positives;
    } else {
      ++rep.n_false_predictions;
    }
  }
  if (rep.n_true_positives > 0) {
    rep.matched_min_ade /= static_cast<double>(rep.n_true_positives);
    rep.matched_min_fde /= static_cast<double>(rep.n_true_positives);
  }
  rep.n_missed_gt = gt.size() - rep.n_true_positives;
  rep.map_f = average_precision(tp_by_rank, gt.size());
  return rep;
}

}  // namespace trajforge
