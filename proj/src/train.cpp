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

#include "trajforge/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "trajforge/errors.hpp"
#include "trajforge/simulator.hpp"

namespace trajforge {
namespace {

class Optimizer {
 public:
  Optimizer(const TrainConfig& cfg, Eigen::Index n) : cfg_(cfg) {
    if (cfg.optimizer != OptimizerKind::kSgd) first_ = Eigen::VectorXd::Zero(n);
    if (cfg.optimizer == OptimizerKind::kAdam) second_ = Eigen::VectorXd::Zero(n);
  }

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, double lr) {
    switch (cfg_.optimizer) {
      case OptimizerKind::kSgd:
        theta -= lr * grad;
        break;
      case OptimizerKind::kMomentum:
        first_ = cfg_.momentum * first_ + grad;
        theta -= lr * first_;
        break;
      case OptimizerKind::kAdam: {
        ++t_;
        first_ = cfg_.adam_beta1 * first_ + (1.0 - cfg_.adam_beta1) * grad;
        second_ = cfg_.adam_beta2 * second_ + (1.0 - cfg_.adam_beta2) * grad.cwiseAbs2();
        const double c1 = 1.0 - std::pow(cfg_.adam_beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.adam_beta2, static_cast<double>(t_));
        theta.array() -= lr * (first_.array() / c1) /
                         ((second_.array() / c2).sqrt() + cfg_.adam_eps);
        break;
      }
    }
  }

 private:
  const TrainConfig& cfg_;
  Eigen::VectorXd first_;
  Eigen::VectorXd second_;
  long t_ = 0;
};

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  // lr = 0 is accepted as a no-op run.
  if (!(lr >= 0.0)) throw ConfigError("train.lr must be >= 0");
  if (!(lr_finetune_factor > 0.0)) throw ConfigError("train.lr_finetune_factor must be > 0");
  if (eval_every < 1) throw ConfigError("train.eval_every must be >= 1");
  if (grad_clip && !(*grad_clip > 0.0)) throw ConfigError("train.grad_clip must be > 0");
  if (hidden < 1) throw ConfigError("train.hidden must be >= 1");
  if (modes < 1) throw ConfigError("train.modes must be >= 1");
  if (!(conf_weight >= 0.0)) throw ConfigError("train.conf_weight must be >= 0");
}

std::string to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::kScratch:
      return "scratch";
    case TrainMode::kPretrain:
      return "pretrain";
    case TrainMode::kFinetune:
      return "finetune";
  }
  return "?";
}

ValidationResult validate_model(const ForecasterParams& params, const SampleSet& set,
                                const MetricsConfig& mcfg, double conf_weight) {
  params.validate();
  ValidationResult res;
  std::vector<SampleMetrics> records;
  records.reserve(set.size());
  for (const auto& s : set.samples) {
    const ForecastOutput out = forward_features(params, featurize(s));
    records.push_back(eval_sample(out, s.future, mcfg));
    int winner = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.modes.size(); ++k) {
      const double ade = average_displacement(out.modes[k], s.future);
      if (ade < best) {
        best = ade;
        winner = static_cast<int>(k);
      }
    }
    res.loss += best - conf_weight * std::log(out.confidences[winner]);
  }
  res.loss /= static_cast<double>(set.size());
  res.metrics = eval_set(records);
  return res;
}

TrainRun train(TrainMode mode, const std::optional<ForecasterParams>& init, const SampleSet& data,
               const SampleSet& val, const TrainConfig& cfg, const MetricsConfig& mcfg) {
  cfg.validate();
  if (data.empty()) throw InputError("train: empty training set");

  TrainRun run;
  run.mode = mode;
  double lr = cfg.lr;
  if (mode == TrainMode::kFinetune) {
    if (!init) throw InputError("train: fine-tuning requires an initial checkpoint");
    if (init->shape.past_len != data.past_len || init->shape.future_len != data.future_len) {
      throw InputError("train: checkpoint L/M (" + std::to_string(init->shape.past_len) + "/" +
                       std::to_string(init->shape.future_len) + ") does not match data (" +
                       std::to_string(data.past_len) + "/" + std::to_string(data.future_len) + ")");
    }
    init->validate();
    run.final_params = *init;
    lr *= cfg.lr_finetune_factor;
  } else if (init) {
    if (init->shape.past_len != data.past_len || init->shape.future_len != data.future_len) {
      throw InputError("train: initial parameters do not match data L/M");
    }
    run.final_params = *init;
  } else {
    ForecasterShape shape;
    shape.past_len = data.past_len;
    shape.future_len = data.future_len;
    shape.hidden = cfg.hidden;
    shape.modes = cfg.modes;
    run.final_params = ForecasterParams::initialize(
        shape, fit_anchors(data.samples, cfg.modes, cfg.seed), cfg.seed);
  }

  ForecasterParams& params = run.final_params;
  Optimizer opt(cfg, params.theta.size());
  const LossOptions lopts{cfg.conf_weight};
  std::vector<std::size_t> order(data.size());
  std::vector<const ForecastSample*> batch;
  batch.reserve(cfg.batch_size);
  Eigen::VectorXd grad;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(derive_seed(cfg.seed, seed_stream::kShuffle, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.effective_lr = lr;
    double loss_sum = 0.0;
    double ade_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(&data.samples[order[i]]);
      const LossBreakdown lb =
          loss_and_grad(params, std::span<const ForecastSample* const>(batch), lopts, &grad);
      const double weight = static_cast<double>(end - start);
      loss_sum += lb.total * weight;
      ade_sum += lb.ade_term * weight;
      double norm = grad.norm();
      if (cfg.grad_clip && norm > *cfg.grad_clip) {
        grad *= *cfg.grad_clip / norm;
        norm = grad.norm();
      }
      rec.max_grad_norm = std::max(rec.max_grad_norm, norm);
      opt.step(params.theta, grad, lr);
    }
    rec.train_loss = loss_sum / static_cast<double>(data.size());
    rec.train_min_ade = ade_sum / static_cast<double>(data.size());
    if (!val.empty() && (epoch % cfg.eval_every == 0 || epoch == cfg.epochs)) {
      const ValidationResult v = validate_model(params, val, mcfg, cfg.conf_weight);
      rec.has_val = true;
      rec.val_loss = v.loss;
      rec.val = v.metrics;
    }
    run.history.push_back(rec);
  }
  return run;
}

PptResult ppt_protocol(const TrainRun& pretrained, const SampleSet& labeled, const SampleSet& val,
                       double fraction, const PptConfig& cfg, const MetricsConfig& mcfg) {
  const SampleSet subset = sample_fraction(labeled, SplitSpec{fraction, cfg.train.seed});
  if (subset.empty()) throw InputError("ppt_protocol: labeled fraction is empty");
  PptResult res;
  res.pretrain = pretrained;
  res.ppt = train(TrainMode::kFinetune, pretrained.final_params, subset, val, cfg.train, mcfg);
  res.scratch = train(TrainMode::kScratch, std::nullopt, subset, val, cfg.train, mcfg);
  return res;
}

PptResult ppt_protocol(const SampleSet& pseudo, const SampleSet& labeled, const SampleSet& val,
                       double fraction, const PptConfig& cfg, const MetricsConfig& mcfg) {
  if (pseudo.empty()) throw InputError("empty pre-training set");
  TrainConfig pre = cfg.train;
  if (cfg.pretrain_epochs > 0) pre.epochs = cfg.pretrain_epochs;
  const TrainRun pretrained = train(TrainMode::kPretrain, std::nullopt, pseudo, val, pre, mcfg);
  return ppt_protocol(pretrained, labeled, val, fraction, cfg, mcfg);
}

int epochs_to_converge(const TrainRun& run, double rel) {
  if (run.history.empty() || !run.history.back().has_val) return 0;
  const double final_value = run.history.back().val.brier_fde;
  for (const auto& rec : run.history) {
    if (rec.has_val && rec.val.brier_fde <= (1.0 + rel) * final_value) return rec.epoch;
  }
  return run.history.back().epoch;
}

}  // namespace trajforge
