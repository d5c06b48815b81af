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

// trajforge command-line driver.
//
// Configuration is layered: built-in defaults, then --config FILE, then
// TRAJFORGE_SEED, then --<section>.<key> flags in command-line order, then
// --jobs. Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trajforge/config.hpp"
#include "trajforge/errors.hpp"
#include "trajforge/experiment.hpp"
#include "trajforge/io.hpp"
#include "trajforge/report.hpp"

namespace fs = std::filesystem;
using namespace trajforge;

namespace {

// Bad invocation: exit code 2.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(what) {}
};

void warn(const std::string& msg) { std::fprintf(stderr, "trajforge: warning: %s\n", msg.c_str()); }
void info(const std::string& msg) { std::fprintf(stderr, "trajforge: %s\n", msg.c_str()); }

struct Globals {
  std::string config_path;
  int jobs = 0;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Pulls every --section.key[=value] flag out of argv. Command options never
// contain a dot, so the split is unambiguous.
std::vector<std::string> extract_overrides(int argc, char** argv, Globals& g) {
  std::vector<std::string> rest;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0 || arg.size() < 3) {
      rest.push_back(arg);
      continue;
    }
    std::string name = arg.substr(2);
    std::optional<std::string> value;
    if (const auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    }
    if (name.find('.') == std::string::npos) {
      rest.push_back(arg);
      continue;
    }
    if (!value) {
      if (i + 1 >= argc) throw UsageError("--" + name + " needs a value");
      value = argv[++i];
    }
    g.overrides.emplace_back(name, *value);
  }
  return rest;
}

PipelineConfig load(const Globals& g) {
  PipelineConfig cfg;
  try {
    if (!g.config_path.empty()) {
      if (!fs::exists(g.config_path)) throw UsageError("config file not found: " + g.config_path);
      apply_ini(cfg, read_file(g.config_path), g.config_path);
    }
    apply_seed_env(cfg);
    for (const auto& [key, value] : g.overrides) {
      try {
        cfg.set(key, value);
      } catch (const ConfigError& e) {
        throw UsageError("--" + key + ": " + e.what());
      }
    }
    if (g.jobs > 0) cfg.bench.jobs = g.jobs;
    cfg.validate();
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// Records digests and wall-clock for one command into the manifest next to
// its primary output.
class Stage {
 public:
  Stage(std::string name, const PipelineConfig& cfg)
      : cfg_(cfg), start_(std::chrono::steady_clock::now()) {
    rec_.name = std::move(name);
  }
  void input(const fs::path& p) { inputs_.push_back(p); }
  void output(const fs::path& p) { outputs_.push_back(p); }

  void finish(const fs::path& manifest_dir) {
    for (const auto& p : inputs_) rec_.inputs.emplace_back(p.string(), file_sha256(p));
    for (const auto& p : outputs_) rec_.outputs.emplace_back(p.string(), file_sha256(p));
    rec_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    update_manifest(manifest_dir / "manifest.json", cfg_.hash(), rec_);
  }

 private:
  const PipelineConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  StageRecord rec_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

fs::path dir_of(const fs::path& p) { return p.has_parent_path() ? p.parent_path() : fs::path("."); }

void require_file(const std::string& p, const char* what) {
  if (!fs::exists(p)) throw Error(std::string(what) + " not found: " + p);
}

// Position of a profile in the benchmark order; also the detection stream id.
std::size_t profile_slot(const BenchmarkConfig& bc, const std::string& id) {
  for (std::size_t i = 0; i < bc.profiles.size(); ++i) {
    if (bc.profiles[i].profile_id == id) return i;
  }
  throw UsageError("detector profile '" + id + "' is not selected (see experiment.profiles)");
}

// Stable stream index for scenes not named by scene_name.
std::uint64_t stream_index(const std::string& scene_id) {
  if (auto idx = scene_index(scene_id)) return *idx;
  return std::stoull(sha256_hex(scene_id).substr(0, 16), nullptr, 16);
}

template <typename T>
std::vector<std::vector<T>> group_by_scene(const std::vector<T>& items) {
  std::map<std::string, std::size_t> slot;
  std::vector<std::vector<T>> groups;
  for (const auto& it : items) {
    auto [pos, fresh] = slot.emplace(it.scene_id, groups.size());
    if (fresh) groups.emplace_back();
    groups[pos->second].push_back(it);
  }
  return groups;
}

// ---- commands ----

struct SimulateOpts {
  std::string out;
  std::string pool = "labeled";
  std::string regime = "scene";
  int scenes = -1;
};

int cmd_simulate(const PipelineConfig& cfg, const SimulateOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  std::uint64_t offset = 0;
  int count = bc.labeled_scenes;
  if (o.pool == "val") {
    offset = kValSceneOffset;
    count = bc.val_scenes;
  } else if (o.pool == "pseudo") {
    offset = kPseudoSceneOffset;
    count = bc.pseudo_scenes;
  }
  if (o.scenes >= 0) count = o.scenes;
  const SceneConfig& regime = o.regime == "target" ? bc.target_scene : bc.scene;
  Stage stage("simulate", cfg);
  std::vector<std::vector<Trajectory>> scenes(static_cast<std::size_t>(count));
  parallel_for(scenes.size(), bc.jobs, [&](std::size_t i) {
    scenes[i] = simulate_scene(regime, bc.data_seed, offset + i);
  });
  std::vector<Trajectory> all;
  for (auto& s : scenes) all.insert(all.end(), s.begin(), s.end());
  write_trajectories(o.out, all);
  stage.output(o.out);
  stage.finish(dir_of(o.out));
  info("simulate: " + std::to_string(count) + " scenes, " + std::to_string(all.size()) + " trajectories");
  return 0;
}

struct IoOpts {
  std::string in;
  std::string out;
  std::string profile;
};

int cmd_detect(const PipelineConfig& cfg, const IoOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  const std::string id = o.profile.empty() ? bc.profiles.front().profile_id : o.profile;
  const std::size_t slot = profile_slot(bc, id);
  require_file(o.in, "input");
  Stage stage("detect", cfg);
  stage.input(o.in);
  const auto scenes = group_by_scene(read_trajectories(o.in));
  std::vector<std::vector<DetectionFrame>> per(scenes.size());
  parallel_for(scenes.size(), bc.jobs, [&](std::size_t i) {
    per[i] = detect_scene(scenes[i], bc.profiles[slot], slot, stream_index(scenes[i].front().scene_id), bc);
  });
  std::vector<DetectionFrame> all;
  for (auto& f : per) all.insert(all.end(), f.begin(), f.end());
  write_detections(o.out, all);
  stage.output(o.out);
  stage.finish(dir_of(o.out));
  info("detect: " + std::to_string(all.size()) + " frames with profile " + id);
  return 0;
}

int cmd_track(const PipelineConfig& cfg, const IoOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  const std::string id = o.profile.empty() ? bc.profiles.front().profile_id : o.profile;
  const DetectorProfile& profile = bc.profiles[profile_slot(bc, id)];
  require_file(o.in, "input");
  Stage stage("track", cfg);
  stage.input(o.in);
  const auto frames = read_detections(o.in);
  if (frames.empty()) warn("track: " + o.in + " holds no detection frames; writing an empty trajectory file");
  const auto scenes = group_by_scene(frames);
  std::vector<std::vector<Trajectory>> per(scenes.size());
  parallel_for(scenes.size(), bc.jobs, [&](std::size_t i) { per[i] = track_scene(scenes[i], profile, bc); });
  std::vector<Trajectory> all;
  for (auto& t : per) all.insert(all.end(), t.begin(), t.end());
  write_trajectories(o.out, all);
  stage.output(o.out);
  stage.finish(dir_of(o.out));
  info("track: " + std::to_string(all.size()) + " trajectories");
  return 0;
}

struct DatasetOpts {
  std::vector<std::string> in;
  std::string out;
  int stride = 0;
  double fraction = 1.0;
  std::optional<std::uint64_t> fraction_seed;
};

int cmd_build_dataset(const PipelineConfig& cfg, const DatasetOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  WindowConfig w = bc.window;
  if (o.stride > 0) w.stride = o.stride;
  w.validate();
  Stage stage("build-dataset", cfg);
  std::vector<SampleSet> sets;
  for (const auto& path : o.in) {
    require_file(path, "input");
    stage.input(path);
    sets.push_back(window_samples(read_trajectories(path), w));
  }
  SampleSet set = merge_sets(sets);
  if (o.fraction != 1.0) {
    const SplitSpec spec{o.fraction, o.fraction_seed.value_or(cfg.seed)};
    try {
      spec.validate();
    } catch (const ConfigError& e) {
      throw UsageError(std::string("--fraction: ") + e.what());
    }
    set = sample_fraction(set, spec);
    for (std::size_t i = 0; i < set.samples.size(); ++i) set.samples[i].sample_id = i;
  }
  if (set.empty()) warn("build-dataset: no eligible windows");
  write_samples(o.out, set);
  stage.output(o.out);
  stage.finish(dir_of(o.out));
  info("build-dataset: " + std::to_string(set.size()) + " samples");
  return 0;
}

struct TrainOpts {
  std::string data;
  std::string val;
  std::string mode = "scratch";
  std::string init;
  std::string out;
  std::string history;
};

int cmd_train(const PipelineConfig& cfg, const TrainOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  TrainMode mode;
  if (o.mode == "scratch") {
    mode = TrainMode::kScratch;
  } else if (o.mode == "pretrain") {
    mode = TrainMode::kPretrain;
  } else if (o.mode == "finetune") {
    mode = TrainMode::kFinetune;
  } else {
    throw UsageError("--mode must be scratch, pretrain or finetune");
  }
  if (mode == TrainMode::kFinetune && (o.init.empty() || !fs::exists(o.init))) {
    throw UsageError("checkpoint not found" + (o.init.empty() ? std::string() : ": " + o.init));
  }
  require_file(o.data, "training data");
  Stage stage("train", cfg);
  stage.input(o.data);
  const SampleSet data = read_samples(o.data);
  SampleSet val;
  if (!o.val.empty()) {
    require_file(o.val, "validation data");
    stage.input(o.val);
    val = read_samples(o.val);
  }
  TrainConfig tc = bc.train;
  if (mode == TrainMode::kPretrain) tc.epochs = bc.pretrain_epochs;
  std::optional<ForecasterParams> init;
  std::string lineage = to_string(mode);
  if (!o.init.empty()) {
    if (!fs::exists(o.init)) throw UsageError("checkpoint not found: " + o.init);
    stage.input(o.init);
    init = read_checkpoint(o.init).params;
    lineage += "<-" + file_sha256(o.init).substr(0, 16);
  }
  const TrainRun run = train(mode, init, data, val, tc, bc.metrics);
  write_checkpoint(o.out, Checkpoint{run.final_params, tc.seed, lineage});
  stage.output(o.out);
  if (!o.history.empty()) {
    write_file_atomic(o.history, to_csv(history_table(run)));
    stage.output(o.history);
  }
  stage.finish(dir_of(o.out));
  const EpochRecord& last = run.history.back();
  std::string msg = "train: " + std::to_string(run.history.size()) + " epochs, loss " +
                    format_double(last.train_loss);
  if (last.has_val) msg += ", val brier_fde " + format_double(last.val.brier_fde);
  info(msg);
  return 0;
}

struct EvalOpts {
  std::string model;
  std::string data;
  std::string out;
  std::string csv;
};

int cmd_eval(const PipelineConfig& cfg, const EvalOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  if (!fs::exists(o.model)) throw UsageError("checkpoint not found: " + o.model);
  require_file(o.data, "evaluation data");
  Stage stage("eval", cfg);
  stage.input(o.model);
  stage.input(o.data);
  const Checkpoint ckpt = read_checkpoint(o.model);
  const MetricsReport r = evaluate(ckpt.params, read_samples(o.data), bc.metrics);
  write_file_atomic(o.out, to_json(r));
  stage.output(o.out);
  if (!o.csv.empty()) {
    CsvTable t;
    t.header = {"model", "data", "n_samples", "brier_fde", "min_ade", "min_fde", "miss_rate"};
    t.rows.push_back({o.model, o.data, std::to_string(r.n_samples), format_double(r.brier_fde),
                      format_double(r.min_ade), format_double(r.min_fde), format_double(r.miss_rate)});
    write_file_atomic(o.csv, to_csv(t));
    stage.output(o.csv);
  }
  stage.finish(dir_of(o.out));
  std::printf("n_samples %zu brier_fde %s min_ade %s min_fde %s miss_rate %s\n", r.n_samples,
              format_double(r.brier_fde).c_str(), format_double(r.min_ade).c_str(),
              format_double(r.min_fde).c_str(), format_double(r.miss_rate).c_str());
  return 0;
}

struct QualityOpts {
  std::string pseudo;
  std::string gt;
  std::string out;
};

int cmd_assess_quality(const PipelineConfig& cfg, const QualityOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  require_file(o.pseudo, "pseudo trajectories");
  require_file(o.gt, "ground truth");
  Stage stage("assess-quality", cfg);
  stage.input(o.pseudo);
  stage.input(o.gt);
  const QualityReport r =
      assess_pseudo_quality(read_trajectories(o.pseudo), read_trajectories(o.gt), bc.window, bc.metrics);
  if (r.empty) warn("assess-quality: no pseudo window matched the ground truth");
  write_file_atomic(o.out, to_json(r));
  stage.output(o.out);
  stage.finish(dir_of(o.out));
  std::printf("matched %zu of %zu gt windows (rate %s), min_ade %s min_fde %s\n", r.n_matched, r.n_gt_windows,
              format_double(r.match_rate).c_str(), format_double(r.metrics.min_ade).c_str(),
              format_double(r.metrics.min_fde).c_str());
  return 0;
}

struct E2EOpts {
  std::string model;
  std::string tracks;
  std::string gt;
  std::string out;
};

int cmd_eval_e2e(const PipelineConfig& cfg, const E2EOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  if (!fs::exists(o.model)) throw UsageError("checkpoint not found: " + o.model);
  require_file(o.tracks, "tracked trajectories");
  require_file(o.gt, "ground truth");
  Stage stage("eval-e2e", cfg);
  stage.input(o.model);
  stage.input(o.tracks);
  stage.input(o.gt);
  const Checkpoint ckpt = read_checkpoint(o.model);
  const E2EInputs in = build_e2e_inputs(read_trajectories(o.tracks), read_trajectories(o.gt), bc.window);
  if (in.gt.empty()) throw Error("eval-e2e: no ground-truth trajectory has a full window");
  const E2EReport r = evaluate_e2e(ckpt.params, in, bc.metrics);
  write_file_atomic(o.out, to_json(r));
  stage.output(o.out);
  stage.finish(dir_of(o.out));
  std::printf("map_f %s tp %zu fp %zu missed %zu\n", format_double(r.map_f).c_str(), r.n_true_positives,
              r.n_false_predictions, r.n_missed_gt);
  return 0;
}

struct ExperimentOpts {
  std::string mode;
  std::string out_dir = "results";
};

void write_table(Stage& stage, const fs::path& p, const CsvTable& t) {
  write_file_atomic(p, to_csv(t));
  stage.output(p);
}

void write_text(Stage& stage, const fs::path& p, const std::string& text) {
  write_file_atomic(p, text);
  stage.output(p);
}

void print_table(const CsvTable& t) { std::fputs(to_csv(t).c_str(), stdout); }

void write_ppt(Stage& stage, const fs::path& dir, const std::string& prefix, const PptExperiment& ex) {
  write_table(stage, dir / (prefix + ".csv"), ppt_table(ex));
  const CsvTable fractions = fraction_table(ex);
  write_table(stage, dir / (prefix + "_fractions.csv"), fractions);
  write_table(stage, dir / (prefix + "_convergence.csv"), convergence_table(ex));
  write_text(stage, dir / (prefix + "_fractions.svg"), fraction_chart(ex));
  write_text(stage, dir / (prefix + "_convergence.svg"), convergence_chart(ex));
  print_table(fractions);
}

int cmd_experiment(const PipelineConfig& cfg, const ExperimentOpts& o) {
  const BenchmarkConfig bc = cfg.benchmark();
  const fs::path dir = o.out_dir;
  Stage stage("experiment-" + o.mode, cfg);
  if (o.mode == "ppt") {
    const Benchmark bench = build_benchmark(bc, 1);
    const PptExperiment ex = run_ppt_experiment(bench, bc);
    write_ppt(stage, dir, "ppt", ex);
    for (std::size_t i = 0; i < ex.pretrain.size(); ++i) {
      const fs::path p = dir / ("pretrain_seed" + std::to_string(bc.seeds[i]) + ".ckpt");
      write_checkpoint(p, Checkpoint{ex.pretrain[i].final_params, replicate_seed(bc, bc.seeds[i]),
                                     "pretrain:" + bench.pseudo.front().profile_id});
      stage.output(p);
    }
  } else if (o.mode == "quantity") {
    const Benchmark bench = build_benchmark(bc, 1);
    const auto rows = run_quantity_experiment(bench, bc);
    write_table(stage, dir / "quantity.csv", ablation_table(rows));
    const CsvTable summary = ablation_summary(rows);
    write_table(stage, dir / "quantity_summary.csv", summary);
    ChartSeries s{"pre-trained only", {}};
    for (const auto& r : summary.rows) s.points.emplace_back(std::stod(r[0]), std::stod(r[2]));
    write_text(stage, dir / "quantity.svg",
               line_chart_svg({"Brier-FDE vs pseudo-data fraction", "pseudo fraction", "Brier-FDE", true}, {s}));
    print_table(summary);
  } else if (o.mode == "diversity") {
    // Only the first diversity_scenes pseudo scenes are used.
    BenchmarkConfig dc = bc;
    dc.pseudo_scenes = dc.diversity_scenes;
    const Benchmark bench = build_benchmark(dc);
    const auto rows = run_diversity_experiment(bench, dc);
    write_table(stage, dir / "diversity.csv", ablation_table(rows));
    const CsvTable summary = ablation_summary(rows);
    write_table(stage, dir / "diversity_summary.csv", summary);
    print_table(summary);
  } else if (o.mode == "generalization") {
    write_ppt(stage, dir, "generalization", run_generalization_experiment(bc));
  } else {
    throw UsageError("unknown experiment mode '" + o.mode + "'");
  }
  stage.finish(dir);
  return 0;
}

int cmd_config(const PipelineConfig& cfg, bool keys) {
  if (!keys) {
    std::fputs(cfg.to_ini().c_str(), stdout);
    return 0;
  }
  for (const auto& k : config_keys()) std::printf("--%-36s %s\n", k.name.c_str(), k.help.c_str());
  for (const auto& k : detector_keys()) {
    std::printf("--%-36s %s\n", ("detector.<id>." + k.name).c_str(), k.help.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  std::vector<std::string> args;
  try {
    args = extract_overrides(argc, argv, g);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "trajforge: error: %s\n", e.what());
    return 2;
  }

  CLI::App app{"trajforge: pseudo-labeled trajectory pre-training pipeline"};
  app.footer(
      "Every config key is also a flag, e.g. --tracker.max-age 3 or --detector.moderate.pos-sigma 0.2.\n"
      "`trajforge config --keys` lists them. TRAJFORGE_SEED overrides run.seed.");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", g.config_path, "configuration file");
  app.add_option("--jobs", g.jobs, "worker threads (overrides run.jobs)")->check(CLI::PositiveNumber);

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "generate ground-truth scenes");
  c_sim->add_option("--out", sim.out, "trajectories.jsonl to write")->required();
  c_sim->add_option("--pool", sim.pool, "scene pool: labeled, val or pseudo")
      ->check(CLI::IsMember({"labeled", "val", "pseudo"}));
  c_sim->add_option("--regime", sim.regime, "scene or target (scene regime section)")
      ->check(CLI::IsMember({"scene", "target"}));
  c_sim->add_option("--scenes", sim.scenes, "number of scenes (default: the pool size)");

  IoOpts det;
  auto* c_det = app.add_subcommand("detect", "run a simulated detector over ground truth");
  c_det->add_option("--in", det.in, "ground-truth trajectories.jsonl")->required();
  c_det->add_option("--out", det.out, "detections.jsonl to write")->required();
  c_det->add_option("--profile", det.profile, "detector profile id (default: the pseudo source)");

  IoOpts trk;
  auto* c_trk = app.add_subcommand("track", "track detections into pseudo-labeled trajectories");
  c_trk->add_option("--in", trk.in, "detections.jsonl")->required();
  c_trk->add_option("--out", trk.out, "trajectories.jsonl to write")->required();
  c_trk->add_option("--profile", trk.profile, "profile that produced the detections");

  DatasetOpts ds;
  auto* c_ds = app.add_subcommand("build-dataset", "window trajectories into forecasting samples");
  c_ds->add_option("--in", ds.in, "trajectories.jsonl (repeatable)")->required();
  c_ds->add_option("--out", ds.out, "samples.jsonl to write")->required();
  c_ds->add_option("--stride", ds.stride, "anchor stride (default: window.stride)");
  c_ds->add_option("--fraction", ds.fraction, "keep this fraction of trajectories");
  c_ds->add_option("--fraction-seed", ds.fraction_seed, "subset seed (default: run.seed)");

  TrainOpts tr;
  auto* c_tr = app.add_subcommand("train", "train a forecaster");
  c_tr->add_option("--data", tr.data, "training samples.jsonl")->required();
  c_tr->add_option("--val", tr.val, "validation samples.jsonl");
  c_tr->add_option("--mode", tr.mode, "scratch, pretrain or finetune");
  c_tr->add_option("--init", tr.init, "checkpoint to start from (required for finetune)");
  c_tr->add_option("--out", tr.out, "checkpoint to write")->required();
  c_tr->add_option("--history", tr.history, "per-epoch history CSV");

  EvalOpts ev;
  auto* c_ev = app.add_subcommand("eval", "score a checkpoint on samples");
  c_ev->add_option("--model", ev.model, "checkpoint")->required();
  c_ev->add_option("--data", ev.data, "samples.jsonl")->required();
  c_ev->add_option("--out", ev.out, "JSON report to write")->required();
  c_ev->add_option("--csv", ev.csv, "one-row CSV report");

  QualityOpts q;
  auto* c_q = app.add_subcommand("assess-quality", "compare pseudo-labeled to ground-truth trajectories");
  c_q->add_option("--pseudo", q.pseudo, "pseudo-labeled trajectories.jsonl")->required();
  c_q->add_option("--gt", q.gt, "ground-truth trajectories.jsonl")->required();
  c_q->add_option("--out", q.out, "JSON report to write")->required();

  E2EOpts e2e;
  auto* c_e2e = app.add_subcommand("eval-e2e", "forecasting mAP on tracked histories");
  c_e2e->add_option("--model", e2e.model, "checkpoint")->required();
  c_e2e->add_option("--tracks", e2e.tracks, "tracked trajectories.jsonl")->required();
  c_e2e->add_option("--gt", e2e.gt, "ground-truth trajectories.jsonl")->required();
  c_e2e->add_option("--out", e2e.out, "JSON report to write")->required();

  ExperimentOpts ex;
  auto* c_ex = app.add_subcommand("experiment", "run a benchmark experiment");
  c_ex->add_option("mode", ex.mode, "ppt, quantity, diversity or generalization")
      ->required()
      ->check(CLI::IsMember({"ppt", "quantity", "diversity", "generalization"}));
  c_ex->add_option("--out-dir", ex.out_dir, "directory for CSV and SVG outputs");

  bool list_keys = false;
  auto* c_cfg = app.add_subcommand("config", "print the effective configuration");
  c_cfg->add_flag("--keys", list_keys, "list every config key instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const PipelineConfig cfg = load(g);
    if (*c_sim) return cmd_simulate(cfg, sim);
    if (*c_det) return cmd_detect(cfg, det);
    if (*c_trk) return cmd_track(cfg, trk);
    if (*c_ds) return cmd_build_dataset(cfg, ds);
    if (*c_tr) return cmd_train(cfg, tr);
    if (*c_ev) return cmd_eval(cfg, ev);
    if (*c_q) return cmd_assess_quality(cfg, q);
    if (*c_e2e) return cmd_eval_e2e(cfg, e2e);
    if (*c_ex) return cmd_experiment(cfg, ex);
    if (*c_cfg) return cmd_config(cfg, list_keys);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "trajforge: error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "trajforge: error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "trajforge: error: %s\n", e.what());
    return 1;
  }
  return 2;
}
