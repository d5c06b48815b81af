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

#ifndef TRAJFORGE__CONFIG_HPP_
#define TRAJFORGE__CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "trajforge/experiment.hpp"

namespace trajforge {

// Everything a pipeline run reads, loaded from an INI-style file:
//
//   [scene]
//   duration = 20
//   motion_mix = 0.4, 0.25, 0.15, 0.2
//   [detector.moderate]
//   pos_sigma = 0.1
//   [experiment]
//   fractions = 0.01, 0.1, 1
//
// A [detector.<id>] section edits that profile or creates it from the
// moderate defaults. experiment.profiles picks which profiles run and in
// what order; experiment.pseudo_source is the one pre-training uses.
struct PipelineConfig {
  std::uint64_t seed = 1;  // run.seed: scene generation, detection and training
  BenchmarkConfig bench;   // module configs and experiment sizes
  std::vector<DetectorProfile> detector_profiles;
  std::vector<std::string> profiles;  // empty: all, in definition order
  std::string pseudo_source;          // empty: first selected profile
  // Empty: skew_ccw and skew_cw when both are selected, else the first two.
  std::vector<std::string> diversity_profiles;

  PipelineConfig();

  // Applies one key. Keys use underscores or dashes ("tracker.max-age").
  // Throws ConfigError on an unknown key or a malformed value.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  // Profiles after selection, the pseudo source first.
  std::vector<DetectorProfile> selected_profiles() const;
  const DetectorProfile& profile(std::string_view id) const;

  // Resolved benchmark settings: seeds applied, profiles selected.
  BenchmarkConfig benchmark() const;

  // Throws ConfigError naming the violated invariant.
  void validate() const;

  // Canonical text form; loading it reproduces this config.
  std::string to_ini() const;
  // SHA-256 of to_ini().
  std::string hash() const;
};

// Every static key with a one-line description, in canonical order.
struct ConfigKey {
  std::string name;
  std::string help;
};
const std::vector<ConfigKey>& config_keys();
// Fields available under [detector.<id>].
const std::vector<ConfigKey>& detector_keys();

// Parses INI text on top of `cfg`. Unknown sections or keys and malformed
// values raise ParseError with file, line and key.
void apply_ini(PipelineConfig& cfg, std::string_view text, const std::string& file);
PipelineConfig load_config(const std::filesystem::path& path);

// TRAJFORGE_SEED, when set, replaces run.seed. Throws ConfigError if it is
// not an unsigned integer.
void apply_seed_env(PipelineConfig& cfg);

}  // namespace trajforge

#endif  // TRAJFORGE__CONFIG_HPP_
