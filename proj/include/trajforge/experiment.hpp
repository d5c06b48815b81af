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

#ifndef TRAJFORGE__EXPERIMENT_HPP_
#define TRAJFORGE__EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajforge/dataset.hpp"
#include "trajforge/metrics.hpp"
#include "trajforge/simulator.hpp"
#include "trajforge/tracker.hpp"
#include "trajforge/train.hpp"

namespace trajforge {

// Desk-scale benchmark: labeled, validation and pseudo-labeled scene pools
// drawn from the simulator, plus the experiment grid run on top of them.
struct BenchmarkConfig {
  SceneConfig scene;
  // Regime used for labeled and validation scenes in generalization runs.
  SceneConfig target_scene;
  std::uint64_t data_seed = 1;
  int labeled_scenes = 200;
  int val_scenes = 50;
  int pseudo_scenes = 1000;
  // The first one is the pseudo source of ppt, quantity and generalization.
  std::vector<DetectorProfile> profiles;
  TrackerConfig tracker;
  // Use each profile's noise levels as the tracker's measurement noise.
  bool match_tracker_noise = true;
  WindowConfig window;
  int pseudo_stride = 5;
  TrainConfig train;
  int pretrain_epochs = 20;
  MetricsConfig metrics;
  std::vector<double> fractions = {0.01, 0.1, 1.0};
  std::vector<double> pseudo_fractions = {0.01, 0.1, 1.0};
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  // Diversity ablation: scenes taken from the start of the pseudo pool and
  // the two profiles compared (indices into `profiles`).
  int diversity_scenes = 300;
  int diversity_profile_a = 1;
  int diversity_profile_b = 2;
  int jobs = 1;

  BenchmarkConfig();
  void validate() const;
};

DetectorProfile moderate_profile();
// The moderate profile with a systematic heading offset. Two of these with
// opposite offsets are the default pair of the diversity ablation.
DetectorProfile skewed_profile(std::string id, double yaw_bias);

struct PseudoSource {
  std::string profile_id;
  std::vector<Trajectory> tracks;  // over the pseudo scene pool
  SampleSet samples;               // windowed at pseudo_stride
};

struct Benchmark {
  std::vector<Trajectory> labeled_gt;
  std::vector<Trajectory> val_gt;
  std::vector<Trajectory> pseudo_gt;
  std::vector<Trajectory> val_tracked;  // val scenes through the first profile
  std::vector<PseudoSource> pseudo;     // one per requested profile
  SampleSet labeled;
  SampleSet val;
};

// Generates every pool. `n_profiles` limits how many profiles are run over
// the pseudo scenes (default: all). `labeled_regime` selects the scene
// regime for labeled and validation scenes.
Benchmark build_benchmark(const BenchmarkConfig& cfg, std::optional<std::size_t> n_profiles = {},
                          const SceneConfig* labeled_regime = nullptr);

// Scene indices of the validation and pseudo pools start here; labeled
// scenes use 0, 1, ...
inline constexpr std::uint64_t kValSceneOffset = 1000000;
inline constexpr std::uint64_t kPseudoSceneOffset = 2000000;

// Scene `index` of a regime, named scene_name(index) and seeded from
// (data_seed, index).
std::vector<Trajectory> simulate_scene(const SceneConfig& regime, std::uint64_t data_seed,
                                       std::uint64_t index);

// Detector output for one scene; the stream is fixed by (data_seed, scene
// index, profile index).
std::vector<DetectionFrame> detect_scene(const std::vector<Trajectory>& scene,
                                         const DetectorProfile& profile, std::size_t profile_index,
                                         std::uint64_t scene_index, const BenchmarkConfig& cfg);

// Tracker over one scene's detections, with the profile's noise as the
// measurement noise when cfg.match_tracker_noise is set.
std::vector<Trajectory> track_scene(const std::vector<DetectionFrame>& frames,
                                    const DetectorProfile& profile, const BenchmarkConfig& cfg);

// detect_scene followed by track_scene.
std::vector<Trajectory> pseudo_label_scene(const std::vector<Trajectory>& scene,
                                           const DetectorProfile& profile, std::size_t profile_index,
                                           std::uint64_t scene_index, const BenchmarkConfig& cfg);

// Training seed of replicate `replicate`: derived from cfg.train.seed so one
// base seed controls every run. Rows report the replicate id.
std::uint64_t replicate_seed(const BenchmarkConfig& cfg, std::uint64_t replicate);

struct PptRow {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::string method;  // "scratch" or "ppt"
  MetricsReport val;
  // (ppt - scratch) / scratch * 100 per metric; empty on scratch rows.
  std::optional<double> rel_brier_fde;
  std::optional<double> rel_min_ade;
  std::optional<double> rel_min_fde;
  std::optional<double> rel_miss_rate;
};

struct CurvePoint {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::string method;
  int epoch = 0;
  double brier_fde = 0.0;
};

struct PptExperiment {
  std::vector<PptRow> rows;       // by (fraction, seed, method)
  std::vector<CurvePoint> curves;  // validation Brier-FDE per epoch
  std::vector<TrainRun> pretrain;  // one per seed
  // Scratch runs on the full labeled set (fraction 1.0), one per seed when
  // 1.0 is in the grid.
  std::vector<TrainRun> scratch_full;
  std::vector<int> ppt_converge_epoch;      // at the largest fraction, per seed
  std::vector<int> scratch_converge_epoch;
};

PptExperiment run_ppt_experiment(const Benchmark& bench, const BenchmarkConfig& cfg);

struct AblationRow {
  std::string setting;  // pseudo fraction or profile set
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  MetricsReport val;
};

// Pre-trains on growing pseudo fractions and scores each model on the
// validation set without fine-tuning. `full_runs`, when given, holds the
// already computed full-pseudo pre-training per seed and is reused for
// fraction 1.0.
std::vector<AblationRow> run_quantity_experiment(const Benchmark& bench, const BenchmarkConfig& cfg,
                                                 const std::vector<TrainRun>* full_runs = nullptr);

// Pre-training on profile A alone, profile B alone, and both at the same
// sample count (the size of A's set), over the first diversity_scenes pseudo
// scenes. Rows are grouped by setting in that order.
std::vector<AblationRow> run_diversity_experiment(const Benchmark& bench,
                                                  const BenchmarkConfig& cfg);

// PPT protocol with pseudo data from cfg.scene and labeled/validation data
// from cfg.target_scene.
PptExperiment run_generalization_experiment(const BenchmarkConfig& cfg);

// End-to-end benchmark inputs: every tracked trajectory with a full history
// at an anchor frame becomes a prediction seed, every ground-truth trajectory
// with a full future becomes a target. Groups are (scene, anchor frame).
struct E2EInputs {
  std::vector<ForecastSample> seeds;  // history only, with to_world set
  std::vector<Box3D> first_frames;
  std::vector<std::int64_t> seed_groups;
  std::vector<E2EGroundTruth> gt;
};

E2EInputs build_e2e_inputs(const std::vector<Trajectory>& tracked, const std::vector<Trajectory>& gt,
                           const WindowConfig& wcfg);

E2EReport evaluate_e2e(const ForecasterParams& params, const E2EInputs& inputs,
                       const MetricsConfig& mcfg);

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results must be written
// to per-index slots so ordering does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn);

}  // namespace trajforge

#include "trajforge/detail/parallel.hpp"

#endif  // TRAJFORGE__EXPERIMENT_HPP_
