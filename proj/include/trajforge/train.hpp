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

#ifndef TRAJFORGE__TRAIN_HPP_
#define TRAJFORGE__TRAIN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajforge/dataset.hpp"
#include "trajforge/forecaster.hpp"
#include "trajforge/metrics.hpp"

namespace trajforge {

enum class OptimizerKind { kSgd, kMomentum, kAdam };

struct TrainConfig {
  int epochs = 10;
  int batch_size = 64;
  double lr = 1e-3;
  double lr_finetune_factor = 0.1;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double momentum = 0.9;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  int eval_every = 1;
  std::optional<double> grad_clip;
  int hidden = 64;
  int modes = 6;
  double conf_weight = 1.0;

  void validate() const;
};

enum class TrainMode { kScratch, kPretrain, kFinetune };
std::string to_string(TrainMode mode);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double effective_lr = 0.0;
  double train_loss = 0.0;
  double train_min_ade = 0.0;  // WTA ADE of the batches seen during the epoch
  double max_grad_norm = 0.0;  // largest gradient norm actually applied
  bool has_val = false;
  double val_loss = 0.0;
  MetricsReport val;
};

struct TrainRun {
  TrainMode mode = TrainMode::kScratch;
  std::vector<EpochRecord> history;
  ForecasterParams final_params;
};

// Mini-batch gradient descent over `data` with per-epoch seeded shuffling.
// Scratch and Pretrain start from fresh parameters with anchors fit on
// `data`; Finetune starts from `init` (anchors kept) with the learning rate
// scaled by lr_finetune_factor. `val` may be empty; otherwise it is scored
// every eval_every epochs and at the last epoch. Deterministic in
// (cfg, data order).
//
// Throws InputError on empty data, a missing Finetune init, or a shape
// mismatch between init and data.
TrainRun train(TrainMode mode, const std::optional<ForecasterParams>& init, const SampleSet& data,
               const SampleSet& val, const TrainConfig& cfg, const MetricsConfig& mcfg = {});

// Mean loss and metrics of a model on a set (one forward per sample).
struct ValidationResult {
  double loss = 0.0;
  MetricsReport metrics;
};
ValidationResult validate_model(const ForecasterParams& params, const SampleSet& set,
                                const MetricsConfig& mcfg, double conf_weight);

struct PptResult {
  TrainRun pretrain;
  TrainRun ppt;      // pretrain, then fine-tune on the labeled fraction
  TrainRun scratch;  // trained on the same labeled fraction only
};

struct PptConfig {
  TrainConfig train;
  int pretrain_epochs = 0;  // 0: same as train.epochs
};

// Pre-train on pseudo labels, fine-tune on a labeled fraction, and compare to
// training from scratch on the same fraction. Both are scored on `val`.
// Throws InputError("empty pre-training set") when pseudo is empty.
PptResult ppt_protocol(const SampleSet& pseudo, const SampleSet& labeled, const SampleSet& val,
                       double fraction, const PptConfig& cfg, const MetricsConfig& mcfg = {});

// Same protocol reusing an existing pre-training run.
PptResult ppt_protocol(const TrainRun& pretrained, const SampleSet& labeled, const SampleSet& val,
                       double fraction, const PptConfig& cfg, const MetricsConfig& mcfg = {});

// First 1-based epoch whose validation Brier-FDE is within `rel` of the final
// epoch's value; 0 if the run has no validation records.
int epochs_to_converge(const TrainRun& run, double rel);

}  // namespace trajforge

#endif  // TRAJFORGE__TRAIN_HPP_
