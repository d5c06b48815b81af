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

#ifndef TRAJFORGE__IO_HPP_
#define TRAJFORGE__IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trajforge/dataset.hpp"
#include "trajforge/forecaster.hpp"
#include "trajforge/geometry.hpp"
#include "trajforge/metrics.hpp"
#include "trajforge/simulator.hpp"
#include "trajforge/train.hpp"

namespace trajforge {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest decimal string that parses back to the same double. Throws
// InputError on NaN or infinity.
std::string format_double(double v);

// Minimal streaming JSON emitter. Doubles go through format_double, so the
// output is byte-stable.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& point(const Point2& p);

  const std::string& str() const { return out_; }

 private:
  void separate();
  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

// Writes to a temporary sibling and renames it over `path`, so readers never
// see a partial file. Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// JSONL formats. Parsers throw ParseError naming the file, line and field.
std::string detections_to_jsonl(const std::vector<DetectionFrame>& frames);
std::vector<DetectionFrame> parse_detections(std::string_view text, const std::string& file);
std::string trajectories_to_jsonl(const std::vector<Trajectory>& trajs);
std::vector<Trajectory> parse_trajectories(std::string_view text, const std::string& file);
// `score` is written only when it differs from 1.
std::string samples_to_jsonl(const SampleSet& set);
// L and M come from the first sample (defaults for an empty file); every
// sample must agree.
SampleSet parse_samples(std::string_view text, const std::string& file);

void write_detections(const std::filesystem::path& path, const std::vector<DetectionFrame>& frames);
std::vector<DetectionFrame> read_detections(const std::filesystem::path& path);
void write_trajectories(const std::filesystem::path& path, const std::vector<Trajectory>& trajs);
std::vector<Trajectory> read_trajectories(const std::filesystem::path& path);
void write_samples(const std::filesystem::path& path, const SampleSet& set);
SampleSet read_samples(const std::filesystem::path& path);

struct Checkpoint {
  ForecasterParams params;
  std::uint64_t seed = 0;
  std::string provenance;  // free-form training lineage, e.g. "finetune<-pretrain"

  friend bool operator==(const Checkpoint& a, const Checkpoint& b);
};

// "TFGCKPT1", u32 LE header length, JSON header, f64 LE parameters.
std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view bytes, const std::string& file);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

std::string to_csv(const CsvTable& table);
// Handles quoted fields. Every row must have as many fields as the header.
CsvTable parse_csv(std::string_view text, const std::string& file);

// epoch, split, loss, minADE, minFDE, brier_fde, miss_rate, effective_lr.
// One "train" row per epoch (metric columns hold the batch WTA ADE in
// minADE and are otherwise empty) and one "val" row per validated epoch.
CsvTable history_table(const TrainRun& run);

std::string to_json(const MetricsReport& r);
std::string to_json(const QualityReport& r);
std::string to_json(const E2EReport& r);
MetricsReport parse_metrics_report(std::string_view text, const std::string& file);
QualityReport parse_quality_report(std::string_view text, const std::string& file);
E2EReport parse_e2e_report(std::string_view text, const std::string& file);

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

struct StageRecord {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::string, std::string>> outputs;
  double wall_seconds = 0.0;

  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::vector<StageRecord> stages;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string to_json(const RunManifest& m);
RunManifest parse_manifest(std::string_view text, const std::string& file);

// Loads the manifest at `path` if present, replaces the stage with the same
// name and first output (or appends it), sets the config hash and writes it
// back atomically.
void update_manifest(const std::filesystem::path& path, const std::string& config_hash,
                     const StageRecord& stage);

}  // namespace trajforge

#endif  // TRAJFORGE__IO_HPP_
