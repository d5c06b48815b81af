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

#include "trajforge/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "trajforge/errors.hpp"
#include "trajforge/io.hpp"

namespace trajforge {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.push_back(trim(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text) {
  const std::string s = trim(text);
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    if constexpr (std::is_floating_point_v<T>) {
      throw ConfigError("expected a number, got '" + s + "'");
    } else if constexpr (std::is_signed_v<T>) {
      throw ConfigError("expected an integer, got '" + s + "'");
    } else {
      throw ConfigError("expected a non-negative integer, got '" + s + "'");
    }
  }
  return v;
}

template <typename T>
struct Codec;

template <>
struct Codec<double> {
  static double parse(std::string_view s) { return parse_number<double>(s); }
  static std::string format(double v) { return format_double(v); }
};
template <>
struct Codec<int> {
  static int parse(std::string_view s) { return parse_number<int>(s); }
  static std::string format(int v) { return std::to_string(v); }
};
template <>
struct Codec<std::uint64_t> {
  static std::uint64_t parse(std::string_view s) { return parse_number<std::uint64_t>(s); }
  static std::string format(std::uint64_t v) { return std::to_string(v); }
};
template <>
struct Codec<bool> {
  static bool parse(std::string_view s) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("expected true or false, got '" + t + "'");
  }
  static std::string format(bool v) { return v ? "true" : "false"; }
};
template <>
struct Codec<std::string> {
  static std::string parse(std::string_view s) { return trim(s); }
  static std::string format(const std::string& v) { return v; }
};
template <>
struct Codec<std::optional<double>> {
  static std::optional<double> parse(std::string_view s) {
    if (trim(s) == "none") return std::nullopt;
    return parse_number<double>(s);
  }
  static std::string format(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }
};
template <typename T>
struct Codec<std::vector<T>> {
  static std::vector<T> parse(std::string_view s) {
    std::vector<T> out;
    for (const auto& part : split_list(s)) out.push_back(Codec<T>::parse(part));
    return out;
  }
  static std::string format(const std::vector<T>& v) {
    std::vector<std::string> parts;
    for (const auto& x : v) parts.push_back(Codec<T>::format(x));
    return join(parts);
  }
};
template <typename T, std::size_t N>
struct Codec<std::array<T, N>> {
  static std::array<T, N> parse(std::string_view s) {
    const auto v = Codec<std::vector<T>>::parse(s);
    if (v.size() != N) {
      throw ConfigError("expected " + std::to_string(N) + " values, got " + std::to_string(v.size()));
    }
    std::array<T, N> out;
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }
  static std::string format(const std::array<T, N>& v) {
    return Codec<std::vector<T>>::format(std::vector<T>(v.begin(), v.end()));
  }
};
template <>
struct Codec<std::set<ObjectClass>> {
  static std::set<ObjectClass> parse(std::string_view s) {
    std::set<ObjectClass> out;
    for (const auto& part : split_list(s)) {
      try {
        out.insert(class_from_name(part));
      } catch (const InputError& e) {
        throw ConfigError(e.what());
      }
    }
    return out;
  }
  static std::string format(const std::set<ObjectClass>& v) {
    std::vector<std::string> parts;
    for (auto c : v) parts.emplace_back(class_name(c));
    return join(parts);
  }
};

// Enums as fixed name tables.
template <typename E>
struct EnumNames;
template <>
struct EnumNames<OptimizerKind> {
  static constexpr std::array<std::pair<OptimizerKind, const char*>, 3> kNames = {
      {{OptimizerKind::kSgd, "sgd"}, {OptimizerKind::kMomentum, "momentum"}, {OptimizerKind::kAdam, "adam"}}};
};
template <>
struct EnumNames<AssociationCost> {
  static constexpr std::array<std::pair<AssociationCost, const char*>, 2> kNames = {
      {{AssociationCost::kNegIoU, "neg_iou"}, {AssociationCost::kCenterDistance, "center_distance"}}};
};
template <>
struct EnumNames<QualityMatchCost> {
  static constexpr std::array<std::pair<QualityMatchCost, const char*>, 2> kNames = {
      {{QualityMatchCost::kMeanPast, "mean_past"},
       {QualityMatchCost::kCurrentPosition, "current_position"}}};
};
template <typename E>
  requires std::is_enum_v<E>
struct Codec<E> {
  static E parse(std::string_view s) {
    const std::string t = trim(s);
    std::vector<std::string> names;
    for (const auto& [value, name] : EnumNames<E>::kNames) {
      if (t == name) return value;
      names.emplace_back(name);
    }
    throw ConfigError("expected one of " + join(names) + ", got '" + t + "'");
  }
  static std::string format(E v) {
    for (const auto& [value, name] : EnumNames<E>::kNames) {
      if (value == v) return name;
    }
    return "?";
  }
};

template <typename Target>
struct Binding {
  std::string name;
  std::string help;
  std::function<void(Target&, std::string_view)> set;
  std::function<std::string(const Target&)> get;
};

template <typename Target, typename Acc>
Binding<Target> make_binding(std::string name, std::string help, Acc acc) {
  using T = std::remove_cvref_t<decltype(acc(std::declval<Target&>()))>;
  return {std::move(name), std::move(help),
          [acc](Target& c, std::string_view v) { acc(c) = Codec<T>::parse(v); },
          [acc](const Target& c) { return Codec<T>::format(acc(const_cast<Target&>(c))); }};
}

#define TF_KEY(name, help, expr) \
  make_binding<PipelineConfig>(name, help, [](PipelineConfig& c) -> auto& { return expr; })
#define TF_DET(name, help, expr) \
  make_binding<DetectorProfile>(name, help, [](DetectorProfile& p) -> auto& { return expr; })

void add_scene_keys(std::vector<Binding<PipelineConfig>>& keys, const std::string& section,
                    bool target) {
  auto scene = [target](PipelineConfig& c) -> SceneConfig& {
    return target ? c.bench.target_scene : c.bench.scene;
  };
  auto add = [&](const char* key, const char* help, auto field) {
    keys.push_back(make_binding<PipelineConfig>(section + "." + key, help,
                                        [scene, field](PipelineConfig& c) -> auto& {
                                          return scene(c).*field;
                                        }));
  };
  add("duration", "scene length in seconds", &SceneConfig::duration);
  add("frame_hz", "ground-truth sampling rate", &SceneConfig::frame_hz);
  add("min_agents", "fewest agents per scene", &SceneConfig::min_agents);
  add("max_agents", "most agents per scene", &SceneConfig::max_agents);
  add("roi", "half-extent of the square region, meters", &SceneConfig::roi);
  add("motion_mix", "weights of constant-velocity, constant-turn, stop-and-go, lane-change",
      &SceneConfig::motion_mix);
  add("min_speed", "slowest initial speed, m/s", &SceneConfig::min_speed);
  add("max_speed", "fastest initial speed, m/s", &SceneConfig::max_speed);
}

const std::vector<Binding<PipelineConfig>>& bindings() {
  static const std::vector<Binding<PipelineConfig>> keys = [] {
    std::vector<Binding<PipelineConfig>> k;
    k.push_back(TF_KEY("run.seed", "base seed for scenes, detections and training", c.seed));
    k.push_back(TF_KEY("run.jobs", "worker threads for experiments", c.bench.jobs));
    add_scene_keys(k, "scene", false);
    add_scene_keys(k, "target_scene", true);
    k.push_back(TF_KEY("tracker.nms_score_threshold", "drop boxes scoring below this",
                       c.bench.tracker.nms_score_threshold));
    k.push_back(TF_KEY("tracker.nms_iou_threshold", "suppress same-class boxes above this BEV IoU",
                       c.bench.tracker.nms_iou_threshold));
    k.push_back(TF_KEY("tracker.gate_center_distance", "association gate, meters",
                       c.bench.tracker.gate_center_distance));
    k.push_back(TF_KEY("tracker.min_hits", "updates before a track is reported", c.bench.tracker.min_hits));
    k.push_back(TF_KEY("tracker.max_age", "missed frames before a track ends", c.bench.tracker.max_age));
    k.push_back(TF_KEY("tracker.process_noise_q", "per-predict variances over cx, cy, cz, yaw, vx, vy",
                       c.bench.tracker.process_noise_q));
    k.push_back(TF_KEY("tracker.measurement_noise_r", "measurement variances over cx, cy, cz, yaw",
                       c.bench.tracker.measurement_noise_r));
    k.push_back(TF_KEY("tracker.initial_velocity_variance", "velocity variance at birth",
                       c.bench.tracker.initial_velocity_variance));
    k.push_back(TF_KEY("tracker.birth_speed_gate", "gate speed for single-hit tracks, m/s",
                       c.bench.tracker.birth_speed_gate));
    k.push_back(TF_KEY("tracker.dims_ema_alpha", "box size smoothing factor", c.bench.tracker.dims_ema_alpha));
    k.push_back(TF_KEY("tracker.output_hz", "rate of emitted trajectories", c.bench.tracker.output_hz));
    k.push_back(TF_KEY("tracker.association_cost", "center_distance or neg_iou",
                       c.bench.tracker.association_cost));
    k.push_back(TF_KEY("tracker.match_profile_noise", "take measurement noise from the detector profile",
                       c.bench.match_tracker_noise));
    k.push_back(TF_KEY("window.past_len", "history frames L", c.bench.window.past_len));
    k.push_back(TF_KEY("window.future_len", "future frames M", c.bench.window.future_len));
    k.push_back(TF_KEY("window.stride", "frames between anchors of labeled samples", c.bench.window.stride));
    k.push_back(TF_KEY("window.sample_hz", "trajectory rate expected by the windower", c.bench.window.sample_hz));
    k.push_back(TF_KEY("window.allowed_classes", "object classes turned into samples",
                       c.bench.window.allowed_classes));
    k.push_back(TF_KEY("forecaster.hidden", "hidden units H", c.bench.train.hidden));
    k.push_back(TF_KEY("forecaster.modes", "prediction modes K", c.bench.train.modes));
    k.push_back(TF_KEY("train.epochs", "fine-tuning and scratch epochs", c.bench.train.epochs));
    k.push_back(TF_KEY("train.batch_size", "samples per step", c.bench.train.batch_size));
    k.push_back(TF_KEY("train.lr", "learning rate", c.bench.train.lr));
    k.push_back(TF_KEY("train.lr_finetune_factor", "learning-rate multiplier when fine-tuning",
                       c.bench.train.lr_finetune_factor));
    k.push_back(TF_KEY("train.optimizer", "sgd, momentum or adam", c.bench.train.optimizer));
    k.push_back(TF_KEY("train.momentum", "momentum coefficient", c.bench.train.momentum));
    k.push_back(TF_KEY("train.adam_beta1", "Adam first-moment decay", c.bench.train.adam_beta1));
    k.push_back(TF_KEY("train.adam_beta2", "Adam second-moment decay", c.bench.train.adam_beta2));
    k.push_back(TF_KEY("train.adam_eps", "Adam denominator offset", c.bench.train.adam_eps));
    k.push_back(TF_KEY("train.eval_every", "epochs between validation passes", c.bench.train.eval_every));
    k.push_back(TF_KEY("train.grad_clip", "gradient norm cap, or none", c.bench.train.grad_clip));
    k.push_back(TF_KEY("train.conf_weight", "weight of the mode classification term",
                       c.bench.train.conf_weight));
    k.push_back(TF_KEY("metrics.k", "modes scored by the metrics", c.bench.metrics.k));
    k.push_back(TF_KEY("metrics.miss_threshold", "miss distance, meters", c.bench.metrics.miss_threshold));
    k.push_back(TF_KEY("metrics.match_threshold", "first-frame match distance, meters",
                       c.bench.metrics.match_threshold));
    k.push_back(TF_KEY("metrics.quality_match_cost", "mean_past or current_position",
                       c.bench.metrics.quality_match_cost));
    k.push_back(TF_KEY("experiment.labeled_scenes", "scenes in the labeled pool", c.bench.labeled_scenes));
    k.push_back(TF_KEY("experiment.val_scenes", "scenes in the validation pool", c.bench.val_scenes));
    k.push_back(TF_KEY("experiment.pseudo_scenes", "scenes run through each detector profile",
                       c.bench.pseudo_scenes));
    k.push_back(TF_KEY("experiment.pseudo_stride", "anchor stride of pseudo-labeled samples",
                       c.bench.pseudo_stride));
    k.push_back(TF_KEY("experiment.pretrain_epochs", "pre-training epochs", c.bench.pretrain_epochs));
    k.push_back(TF_KEY("experiment.fractions", "labeled fractions", c.bench.fractions));
    k.push_back(TF_KEY("experiment.pseudo_fractions", "pseudo-data fractions for the quantity ablation",
                       c.bench.pseudo_fractions));
    k.push_back(TF_KEY("experiment.seeds", "replicate ids", c.bench.seeds));
    k.push_back(TF_KEY("experiment.diversity_scenes", "pseudo scenes used by the diversity ablation",
                       c.bench.diversity_scenes));
    k.push_back(TF_KEY("experiment.profiles", "detector profiles to run, empty for all", c.profiles));
    k.push_back(TF_KEY("experiment.pseudo_source", "profile used for pre-training, empty for the first",
                       c.pseudo_source));
    k.push_back(TF_KEY("experiment.diversity_profiles", "the two profiles of the diversity ablation, empty for skew_ccw and skew_cw",
                       c.diversity_profiles));
    return k;
  }();
  return keys;
}

const std::vector<Binding<DetectorProfile>>& detector_bindings() {
  static const std::vector<Binding<DetectorProfile>> keys = {
      TF_DET("pos_sigma", "center noise, meters", p.pos_sigma),
      TF_DET("dim_sigma", "size noise, meters", p.dim_sigma),
      TF_DET("yaw_sigma", "heading noise, radians", p.yaw_sigma),
      TF_DET("yaw_bias", "systematic heading offset, radians", p.yaw_bias),
      TF_DET("miss_base", "miss probability at zero range", p.miss_base),
      TF_DET("miss_range_coeff", "added miss probability per meter", p.miss_range_coeff),
      TF_DET("fp_rate", "false positives per frame", p.fp_rate),
      TF_DET("detect_hz", "detector rate, 2 or 10", p.detect_hz),
      TF_DET("score_tp_mean", "true-positive score mean", p.score_model.tp_mean),
      TF_DET("score_tp_sigma", "true-positive score spread", p.score_model.tp_sigma),
      TF_DET("score_fp_mean", "false-positive score mean", p.score_model.fp_mean),
      TF_DET("score_fp_sigma", "false-positive score spread", p.score_model.fp_sigma),
  };
  return keys;
}

#undef TF_KEY
#undef TF_DET

std::string normalize(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

// Splits "detector.<id>.<field>"; the id keeps its dashes.
bool split_detector_key(std::string_view key, std::string& id, std::string& field) {
  constexpr std::string_view kPrefix = "detector.";
  if (key.substr(0, kPrefix.size()) != kPrefix) return false;
  const auto rest = key.substr(kPrefix.size());
  const auto dot = rest.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return false;
  id = std::string(rest.substr(0, dot));
  field = normalize(rest.substr(dot + 1));
  return true;
}

}  // namespace

PipelineConfig::PipelineConfig() { detector_profiles = bench.profiles; }

void PipelineConfig::set(std::string_view key, std::string_view value) {
  std::string id, field;
  if (split_detector_key(key, id, field)) {
    for (const auto& b : detector_bindings()) {
      if (b.name != field) continue;
      auto it = std::find_if(detector_profiles.begin(), detector_profiles.end(),
                             [&](const DetectorProfile& p) { return p.profile_id == id; });
      if (it == detector_profiles.end()) {
        DetectorProfile p = moderate_profile();
        p.profile_id = id;
        detector_profiles.push_back(p);
        it = detector_profiles.end() - 1;
      }
      b.set(*it, value);
      return;
    }
    throw ConfigError("unknown detector key '" + field + "'");
  }
  const std::string k = normalize(key);
  for (const auto& b : bindings()) {
    if (b.name == k) {
      b.set(*this, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string PipelineConfig::get(std::string_view key) const {
  std::string id, field;
  if (split_detector_key(key, id, field)) {
    const DetectorProfile& p = profile(id);
    for (const auto& b : detector_bindings()) {
      if (b.name == field) return b.get(p);
    }
    throw ConfigError("unknown detector key '" + field + "'");
  }
  const std::string k = normalize(key);
  for (const auto& b : bindings()) {
    if (b.name == k) return b.get(*this);
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

const DetectorProfile& PipelineConfig::profile(std::string_view id) const {
  for (const auto& p : detector_profiles) {
    if (p.profile_id == id) return p;
  }
  throw ConfigError("no detector profile '" + std::string(id) + "'");
}

std::vector<DetectorProfile> PipelineConfig::selected_profiles() const {
  std::vector<DetectorProfile> out;
  if (profiles.empty()) {
    out = detector_profiles;
  } else {
    for (const auto& id : profiles) out.push_back(profile(id));
  }
  if (!pseudo_source.empty()) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const DetectorProfile& p) { return p.profile_id == pseudo_source; });
    if (it == out.end()) {
      throw ConfigError("experiment.pseudo_source '" + pseudo_source + "' is not a selected profile");
    }
    std::rotate(out.begin(), it, it + 1);
  }
  return out;
}

BenchmarkConfig PipelineConfig::benchmark() const {
  BenchmarkConfig b = bench;
  b.data_seed = seed;
  b.train.seed = seed;
  b.profiles = selected_profiles();
  auto index_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < b.profiles.size(); ++i) {
      if (b.profiles[i].profile_id == id) return static_cast<int>(i);
    }
    throw ConfigError("experiment.diversity_profiles: '" + id + "' is not a selected profile");
  };
  auto selected = [&](const char* id) {
    return std::any_of(b.profiles.begin(), b.profiles.end(),
                       [&](const DetectorProfile& p) { return p.profile_id == id; });
  };
  if (diversity_profiles.empty() && selected("skew_ccw") && selected("skew_cw")) {
    b.diversity_profile_a = index_of("skew_ccw");
    b.diversity_profile_b = index_of("skew_cw");
  } else if (diversity_profiles.empty()) {
    b.diversity_profile_a = 0;
    b.diversity_profile_b = b.profiles.size() > 1 ? 1 : 0;
  } else {
    if (diversity_profiles.size() != 2) {
      throw ConfigError("experiment.diversity_profiles must name exactly two profiles");
    }
    b.diversity_profile_a = index_of(diversity_profiles[0]);
    b.diversity_profile_b = index_of(diversity_profiles[1]);
  }
  return b;
}

void PipelineConfig::validate() const {
  std::set<std::string> ids;
  for (const auto& p : detector_profiles) {
    if (!ids.insert(p.profile_id).second) {
      throw ConfigError("duplicate detector profile '" + p.profile_id + "'");
    }
  }
  std::set<std::string> chosen;
  for (const auto& id : profiles) {
    if (!ids.contains(id)) throw ConfigError("experiment.profiles: no detector profile '" + id + "'");
    if (!chosen.insert(id).second) throw ConfigError("experiment.profiles lists '" + id + "' twice");
  }
  if (diversity_profiles.size() == 2 && diversity_profiles[0] == diversity_profiles[1]) {
    throw ConfigError("experiment.diversity_profiles must name two distinct profiles");
  }
  benchmark().validate();
}

std::string PipelineConfig::to_ini() const {
  std::string out;
  std::string section;
  for (const auto& b : bindings()) {
    const auto dot = b.name.find('.');
    const std::string sec = b.name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += b.name.substr(dot + 1) + " = " + b.get(*this) + "\n";
  }
  for (const auto& p : detector_profiles) {
    out += "\n[detector." + p.profile_id + "]\n";
    for (const auto& b : detector_bindings()) out += b.name + " = " + b.get(p) + "\n";
  }
  return out;
}

std::string PipelineConfig::hash() const { return sha256_hex(to_ini()); }

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& b : bindings()) out.push_back({b.name, b.help});
    return out;
  }();
  return keys;
}

const std::vector<ConfigKey>& detector_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& b : detector_bindings()) out.push_back({b.name, b.help});
    return out;
  }();
  return keys;
}

void apply_ini(PipelineConfig& cfg, std::string_view text, const std::string& file) {
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(file, line_no, line, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      const bool known =
          section.rfind("detector.", 0) == 0 ||
          std::any_of(bindings().begin(), bindings().end(),
                      [&](const auto& b) { return b.name.rfind(normalize(section) + ".", 0) == 0; });
      if (!known) throw ParseError(file, line_no, section, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(file, line_no, line, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (section.empty()) throw ParseError(file, line_no, key, "key outside a section");
    const std::string full = section + "." + key;
    try {
      cfg.set(full, std::string_view(line).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ParseError(file, line_no, full, e.what());
    }
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig cfg;
  apply_ini(cfg, read_file(path), path.string());
  return cfg;
}

void apply_seed_env(PipelineConfig& cfg) {
  const char* env = std::getenv("TRAJFORGE_SEED");
  if (env == nullptr || *env == '\0') return;
  try {
    cfg.seed = parse_number<std::uint64_t>(env);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("TRAJFORGE_SEED: ") + e.what());
  }
}

}  // namespace trajforge
