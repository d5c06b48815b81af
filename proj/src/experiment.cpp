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

#include "trajforge/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "trajforge/errors.hpp"

namespace trajforge {
namespace {

constexpr std::uint64_t kValOffset = kValSceneOffset;
constexpr std::uint64_t kPseudoOffset = kPseudoSceneOffset;

std::optional<double> relative(double ppt, double scratch) {
  if (scratch == 0.0) return std::nullopt;
  return (ppt - scratch) / scratch * 100.0;
}

std::string fraction_label(double f) {
  std::ostringstream os;
  os << f;
  return os.str();
}

TrainConfig pretrain_config(const BenchmarkConfig& cfg, std::uint64_t seed) {
  TrainConfig pre = cfg.train;
  pre.seed = seed;
  pre.epochs = cfg.pretrain_epochs;
  // Pre-training is scored once at the end; its curve is not reported.
  pre.eval_every = cfg.pretrain_epochs;
  return pre;
}

}  // namespace

BenchmarkConfig::BenchmarkConfig() {
  profiles = {moderate_profile(), skewed_profile("skew_ccw", 0.04), skewed_profile("skew_cw", -0.04)};
  train.hidden = 32;
  train.epochs = 15;
  target_scene.min_speed = 4.0;
  target_scene.max_speed = 10.0;
  target_scene.motion_mix = {0.2, 0.4, 0.1, 0.3};
}

void BenchmarkConfig::validate() const {
  scene.validate();
  target_scene.validate();
  if (labeled_scenes < 1 || val_scenes < 1 || pseudo_scenes < 1) {
    throw ConfigError("benchmark scene counts must be >= 1");
  }
  if (profiles.empty()) throw ConfigError("benchmark needs at least one detector profile");
  for (const auto& p : profiles) p.validate();
  tracker.validate();
  window.validate();
  if (pseudo_stride < 1) throw ConfigError("experiment.pseudo_stride must be >= 1");
  train.validate();
  if (pretrain_epochs < 1) throw ConfigError("experiment.pretrain_epochs must be >= 1");
  metrics.validate();
  if (fractions.empty()) throw ConfigError("experiment.fractions must be nonempty");
  for (double f : fractions) SplitSpec{f, 0}.validate();
  for (double f : pseudo_fractions) SplitSpec{f, 0}.validate();
  if (seeds.empty()) throw ConfigError("experiment.seeds must be nonempty");
  if (diversity_scenes < 1 || diversity_scenes > pseudo_scenes) {
    throw ConfigError("experiment.diversity_scenes must be in [1, pseudo_scenes]");
  }
  const int n = static_cast<int>(profiles.size());
  if (diversity_profile_a < 0 || diversity_profile_a >= n || diversity_profile_b < 0 ||
      diversity_profile_b >= n) {
    throw ConfigError("experiment diversity profiles must index detector_profiles");
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

DetectorProfile moderate_profile() { return DetectorProfile{}; }

DetectorProfile skewed_profile(std::string id, double yaw_bias) {
  DetectorProfile p;
  p.profile_id = std::move(id);
  p.yaw_bias = yaw_bias;
  return p;
}

std::vector<Trajectory> simulate_scene(const SceneConfig& regime, std::uint64_t data_seed,
                                       std::uint64_t index) {
  SceneConfig sc = regime;
  sc.seed = derive_seed(data_seed, seed_stream::kScene, index);
  return generate_scene(sc, scene_name(index));
}

std::vector<DetectionFrame> detect_scene(const std::vector<Trajectory>& scene,
                                         const DetectorProfile& profile, std::size_t profile_index,
                                         std::uint64_t scene_index, const BenchmarkConfig& cfg) {
  const std::uint64_t seed =
      derive_seed(derive_seed(cfg.data_seed, seed_stream::kDetect, scene_index),
                  seed_stream::kDetect, profile_index);
  return detect(gt_frames(scene), profile, seed, cfg.scene.roi);
}

std::vector<Trajectory> track_scene(const std::vector<DetectionFrame>& frames,
                                    const DetectorProfile& profile, const BenchmarkConfig& cfg) {
  const TrackerConfig tc =
      cfg.match_tracker_noise ? match_measurement_noise(cfg.tracker, profile) : cfg.tracker;
  return track_sequence(frames, tc, profile.profile_id);
}

std::vector<Trajectory> pseudo_label_scene(const std::vector<Trajectory>& scene,
                                           const DetectorProfile& profile, std::size_t profile_index,
                                           std::uint64_t scene_index, const BenchmarkConfig& cfg) {
  return track_scene(detect_scene(scene, profile, profile_index, scene_index, cfg), profile, cfg);
}

Benchmark build_benchmark(const BenchmarkConfig& cfg, std::optional<std::size_t> n_profiles,
                          const SceneConfig* labeled_regime) {
  cfg.validate();
  const SceneConfig& lab_regime = labeled_regime ? *labeled_regime : cfg.scene;
  const std::size_t n_prof = std::min(cfg.profiles.size(), n_profiles.value_or(cfg.profiles.size()));

  Benchmark b;
  std::vector<std::vector<Trajectory>> per_scene(cfg.labeled_scenes);
  parallel_for(per_scene.size(), cfg.jobs, [&](std::size_t i) {
    per_scene[i] = simulate_scene(lab_regime, cfg.data_seed, i);
  });
  for (auto& s : per_scene) b.labeled_gt.insert(b.labeled_gt.end(), s.begin(), s.end());

  std::vector<std::vector<Trajectory>> val_scene(cfg.val_scenes);
  std::vector<std::vector<Trajectory>> val_track(cfg.val_scenes);
  parallel_for(val_scene.size(), cfg.jobs, [&](std::size_t i) {
    val_scene[i] = simulate_scene(lab_regime, cfg.data_seed, kValOffset + i);
    val_track[i] = pseudo_label_scene(val_scene[i], cfg.profiles.front(), 0, kValOffset + i, cfg);
  });
  for (std::size_t i = 0; i < val_scene.size(); ++i) {
    b.val_gt.insert(b.val_gt.end(), val_scene[i].begin(), val_scene[i].end());
    b.val_tracked.insert(b.val_tracked.end(), val_track[i].begin(), val_track[i].end());
  }

  std::vector<std::vector<Trajectory>> pseudo_scene(cfg.pseudo_scenes);
  std::vector<std::vector<std::vector<Trajectory>>> tracks(
      n_prof, std::vector<std::vector<Trajectory>>(cfg.pseudo_scenes));
  parallel_for(pseudo_scene.size(), cfg.jobs, [&](std::size_t i) {
    pseudo_scene[i] = simulate_scene(cfg.scene, cfg.data_seed, kPseudoOffset + i);
    for (std::size_t p = 0; p < n_prof; ++p) {
      tracks[p][i] = pseudo_label_scene(pseudo_scene[i], cfg.profiles[p], p, kPseudoOffset + i, cfg);
    }
  });
  for (auto& s : pseudo_scene) b.pseudo_gt.insert(b.pseudo_gt.end(), s.begin(), s.end());

  WindowConfig pw = cfg.window;
  pw.stride = cfg.pseudo_stride;
  for (std::size_t p = 0; p < n_prof; ++p) {
    PseudoSource src;
    src.profile_id = cfg.profiles[p].profile_id;
    for (auto& s : tracks[p]) src.tracks.insert(src.tracks.end(), s.begin(), s.end());
    src.samples = window_samples(src.tracks, pw);
    b.pseudo.push_back(std::move(src));
  }
  b.labeled = window_samples(b.labeled_gt, cfg.window);
  b.val = window_samples(b.val_gt, cfg.window);
  return b;
}

std::uint64_t replicate_seed(const BenchmarkConfig& cfg, std::uint64_t replicate) {
  return derive_seed(cfg.train.seed, seed_stream::kReplicate, replicate);
}

PptExperiment run_ppt_experiment(const Benchmark& bench, const BenchmarkConfig& cfg) {
  cfg.validate();
  if (bench.pseudo.empty()) throw InputError("empty pre-training set");
  const std::size_t n_seeds = cfg.seeds.size();
  const std::size_t n_frac = cfg.fractions.size();

  std::vector<TrainRun> pretrain(n_seeds);
  std::vector<std::vector<PptResult>> results(n_seeds, std::vector<PptResult>(n_frac));
  parallel_for(n_seeds, cfg.jobs, [&](std::size_t si) {
    const std::uint64_t seed = replicate_seed(cfg, cfg.seeds[si]);
    if (bench.pseudo.front().samples.empty()) throw InputError("empty pre-training set");
    pretrain[si] = train(TrainMode::kPretrain, std::nullopt, bench.pseudo.front().samples, bench.val,
                         pretrain_config(cfg, seed), cfg.metrics);
    PptConfig pc;
    pc.train = cfg.train;
    pc.train.seed = seed;
    for (std::size_t fi = 0; fi < n_frac; ++fi) {
      results[si][fi] = ppt_protocol(pretrain[si], bench.labeled, bench.val, cfg.fractions[fi], pc,
                                     cfg.metrics);
      results[si][fi].pretrain = TrainRun{};  // kept once in `pretrain`
    }
  });

  PptExperiment ex;
  ex.pretrain = std::move(pretrain);
  const std::size_t largest = static_cast<std::size_t>(
      std::max_element(cfg.fractions.begin(), cfg.fractions.end()) - cfg.fractions.begin());
  for (std::size_t fi = 0; fi < n_frac; ++fi) {
    for (std::size_t si = 0; si < n_seeds; ++si) {
      const PptResult& r = results[si][fi];
      const MetricsReport& s = r.scratch.history.back().val;
      const MetricsReport& p = r.ppt.history.back().val;
      ex.rows.push_back({cfg.fractions[fi], cfg.seeds[si], "scratch", s, {}, {}, {}, {}});
      ex.rows.push_back({cfg.fractions[fi], cfg.seeds[si], "ppt", p,
                         relative(p.brier_fde, s.brier_fde), relative(p.min_ade, s.min_ade),
                         relative(p.min_fde, s.min_fde), relative(p.miss_rate, s.miss_rate)});
      for (const auto* run : {&r.scratch, &r.ppt}) {
        const std::string method = run == &r.scratch ? "scratch" : "ppt";
        for (const auto& rec : run->history) {
          if (rec.has_val) {
            ex.curves.push_back({cfg.fractions[fi], cfg.seeds[si], method, rec.epoch, rec.val.brier_fde});
          }
        }
      }
    }
  }
  for (std::size_t si = 0; si < n_seeds; ++si) {
    ex.ppt_converge_epoch.push_back(epochs_to_converge(results[si][largest].ppt, 0.05));
    ex.scratch_converge_epoch.push_back(epochs_to_converge(results[si][largest].scratch, 0.05));
    for (std::size_t fi = 0; fi < n_frac; ++fi) {
      if (cfg.fractions[fi] == 1.0) ex.scratch_full.push_back(std::move(results[si][fi].scratch));
    }
  }
  return ex;
}

std::vector<AblationRow> run_quantity_experiment(const Benchmark& bench, const BenchmarkConfig& cfg,
                                                 const std::vector<TrainRun>* full_runs) {
  cfg.validate();
  if (bench.pseudo.empty() || bench.pseudo.front().samples.empty()) {
    throw InputError("empty pre-training set");
  }
  if (full_runs && full_runs->size() != cfg.seeds.size()) {
    throw InputError("quantity ablation: cached pre-training runs do not match the seed list");
  }
  const SampleSet& pool = bench.pseudo.front().samples;
  const std::size_t n_seeds = cfg.seeds.size();
  const std::size_t n_frac = cfg.pseudo_fractions.size();
  std::vector<AblationRow> rows(n_seeds * n_frac);
  parallel_for(rows.size(), cfg.jobs, [&](std::size_t idx) {
    const std::size_t fi = idx / n_seeds;
    const std::size_t si = idx % n_seeds;
    const double f = cfg.pseudo_fractions[fi];
    const std::uint64_t seed = replicate_seed(cfg, cfg.seeds[si]);
    AblationRow& row = rows[idx];
    row.setting = fraction_label(f);
    row.seed = cfg.seeds[si];
    if (f == 1.0 && full_runs) {
      // sample_fraction at 1.0 keeps the pool in order, so the cached run is
      // the run this cell would compute.
      row.n_samples = pool.size();
      row.val = (*full_runs)[si].history.back().val;
      return;
    }
    const SampleSet subset = sample_fraction(pool, SplitSpec{f, seed});
    if (subset.size() < static_cast<std::size_t>(cfg.train.modes)) {
      throw InputError("quantity ablation: pseudo fraction " + row.setting + " has fewer than K samples");
    }
    row.n_samples = subset.size();
    const TrainRun run =
        train(TrainMode::kPretrain, std::nullopt, subset, bench.val, pretrain_config(cfg, seed), cfg.metrics);
    row.val = run.history.back().val;
  });
  return rows;
}

std::vector<AblationRow> run_diversity_experiment(const Benchmark& bench,
                                                  const BenchmarkConfig& cfg) {
  cfg.validate();
  const auto a_idx = static_cast<std::size_t>(cfg.diversity_profile_a);
  const auto b_idx = static_cast<std::size_t>(cfg.diversity_profile_b);
  if (a_idx >= bench.pseudo.size() || b_idx >= bench.pseudo.size()) {
    throw InputError("diversity ablation: benchmark lacks the requested profiles");
  }
  if (a_idx == b_idx) throw ConfigError("diversity ablation needs two distinct profiles");

  // Restrict both sources to the first diversity_scenes pseudo scenes.
  const std::string last_scene = scene_name(kPseudoOffset + cfg.diversity_scenes - 1);
  auto restrict = [&](const SampleSet& set) {
    SampleSet out;
    out.past_len = set.past_len;
    out.future_len = set.future_len;
    for (const auto& s : set.samples) {
      if (s.scene_id <= last_scene) out.samples.push_back(s);
    }
    return out;
  };
  const SampleSet single_a = restrict(bench.pseudo[a_idx].samples);
  const SampleSet single_b = restrict(bench.pseudo[b_idx].samples);
  const SampleSet both = merge_sets({single_a, single_b});
  if (single_a.size() < static_cast<std::size_t>(cfg.train.modes)) {
    throw InputError("diversity ablation: too few pseudo samples");
  }
  const std::string label_a = bench.pseudo[a_idx].profile_id;
  const std::string label_b = bench.pseudo[b_idx].profile_id;

  // Every setting is trained on exactly single_a.size() samples: profile A
  // alone, profile B alone, and a uniform subset of their union.
  const std::size_t n = single_a.size();
  const std::size_t n_seeds = cfg.seeds.size();
  std::vector<AblationRow> rows(3 * n_seeds);
  parallel_for(rows.size(), cfg.jobs, [&](std::size_t idx) {
    const std::size_t si = idx % n_seeds;
    const std::size_t setting = idx / n_seeds;
    const std::uint64_t seed = replicate_seed(cfg, cfg.seeds[si]);
    const SampleSet& pool = setting == 0 ? single_a : setting == 1 ? single_b : both;
    SampleSet data;
    if (pool.size() == n) {
      data = pool;
    } else {
      std::vector<std::size_t> order(pool.size());
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(derive_seed(seed, seed_stream::kFraction, pool.size()));
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(std::min(n, pool.size()));
      std::sort(order.begin(), order.end());
      data.past_len = pool.past_len;
      data.future_len = pool.future_len;
      for (std::size_t i : order) data.samples.push_back(pool.samples[i]);
    }
    const TrainRun run =
        train(TrainMode::kPretrain, std::nullopt, data, bench.val, pretrain_config(cfg, seed), cfg.metrics);
    const std::string label = setting == 0 ? label_a : setting == 1 ? label_b : label_a + "+" + label_b;
    rows[idx] = {label, cfg.seeds[si], data.size(), run.history.back().val};
  });
  return rows;
}

PptExperiment run_generalization_experiment(const BenchmarkConfig& cfg) {
  const Benchmark bench = build_benchmark(cfg, 1, &cfg.target_scene);
  return run_ppt_experiment(bench, cfg);
}

E2EInputs build_e2e_inputs(const std::vector<Trajectory>& tracked, const std::vector<Trajectory>& gt,
                           const WindowConfig& wcfg) {
  wcfg.validate();
  std::map<std::string, std::int64_t> scene_index;
  for (const auto& t : gt) scene_index.emplace(t.scene_id, 0);
  std::int64_t next = 0;
  for (auto& [_, idx] : scene_index) idx = next++;
  auto group_of = [&](const std::string& scene, std::int64_t frame) -> std::optional<std::int64_t> {
    const auto it = scene_index.find(scene);
    if (it == scene_index.end()) return std::nullopt;
    return it->second * 1000000 + frame;
  };

  E2EInputs in;
  for (const auto& traj : tracked) {
    if (!wcfg.allowed_classes.contains(traj.class_id)) continue;
    const auto& st = traj.states;
    for (std::size_t a = wcfg.past_len; a < st.size(); ++a) {
      const std::int64_t frame = frame_index(st[a].t, wcfg.sample_hz);
      if (frame % wcfg.stride != 0) continue;
      const auto group = group_of(traj.scene_id, frame);
      if (!group) continue;
      in.seeds.push_back(make_sample(traj, a, wcfg, false));
      Box3D box;
      box.cx = st[a].cx;
      box.cy = st[a].cy;
      box.cz = st[a].cz;
      box.length = st[a].length;
      box.width = st[a].width;
      box.height = st[a].height;
      box.yaw = st[a].yaw;
      box.score = st[a].score.value_or(1.0);
      box.class_id = traj.class_id;
      box.t = st[a].t;
      in.first_frames.push_back(box);
      in.seed_groups.push_back(*group);
    }
  }
  for (const auto& traj : gt) {
    if (!wcfg.allowed_classes.contains(traj.class_id)) continue;
    const auto& st = traj.states;
    for (std::size_t a = 0; a + static_cast<std::size_t>(wcfg.future_len) < st.size(); ++a) {
      const std::int64_t frame = frame_index(st[a].t, wcfg.sample_hz);
      if (frame % wcfg.stride != 0 || frame < wcfg.past_len) continue;
      E2EGroundTruth g;
      g.first_frame = {st[a].cx, st[a].cy};
      for (std::size_t i = a + 1; i <= a + static_cast<std::size_t>(wcfg.future_len); ++i) {
        g.future.push_back({st[i].cx, st[i].cy});
      }
      g.group = *group_of(traj.scene_id, frame);
      in.gt.push_back(std::move(g));
    }
  }
  // Anchors too close to the end of the scene have no ground-truth future.
  std::set<std::int64_t> gt_groups;
  for (const auto& g : in.gt) gt_groups.insert(g.group);
  E2EInputs kept;
  kept.gt = std::move(in.gt);
  for (std::size_t i = 0; i < in.seeds.size(); ++i) {
    if (!gt_groups.contains(in.seed_groups[i])) continue;
    kept.seeds.push_back(std::move(in.seeds[i]));
    kept.first_frames.push_back(in.first_frames[i]);
    kept.seed_groups.push_back(in.seed_groups[i]);
  }
  return kept;
}

E2EReport evaluate_e2e(const ForecasterParams& params, const E2EInputs& inputs,
                       const MetricsConfig& mcfg) {
  params.validate();
  std::vector<E2EPrediction> preds;
  preds.reserve(inputs.seeds.size());
  for (std::size_t i = 0; i < inputs.seeds.size(); ++i) {
    const ForecastSample& s = inputs.seeds[i];
    ForecastOutput out = forward_features(params, featurize(s));
    for (auto& mode : out.modes) {
      for (auto& p : mode) p = s.to_world.to_world(p);
    }
    preds.push_back({inputs.first_frames[i], std::move(out), inputs.seed_groups[i]});
  }
  return map_f(preds, inputs.gt, mcfg);
}

}  // namespace trajforge
