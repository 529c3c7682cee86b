/* Copyright 2026 The SMDNet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include "smdnet/data/pair.hpp"
#include "smdnet/denoiser/model.hpp"
#include "smdnet/diffusion/process.hpp"
#include "smdnet/objectives/metrics.hpp"
#include "smdnet/training/config.hpp"

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smdnet::training {

/// Stacked tensors for a list of pairs.
struct Batch {
  torch::Tensor t1;    ///< [B, 3, H, W]
  torch::Tensor t2;    ///< [B, 3, H, W]
  torch::Tensor mask;  ///< [B, 1, H, W]
  std::vector<std::string> ids;
};

Batch collate(std::span<const data::BiTemporalPair* const> pairs);
Batch collate(const std::vector<data::BiTemporalPair>& pairs);

struct ValidationRecord {
  std::int64_t epoch = 0;
  objectives::MetricsReport report;
};

struct FitResult {
  std::vector<double> step_losses;
  std::vector<ValidationRecord> validations;
  std::int64_t best_epoch = -1;
  double best_f1 = -1.0;
};

using LogFn = std::function<void(const std::string&)>;

/// Owns the model, noise schedule, optimizer and random stream of a run.
class Trainer {
 public:
  explicit Trainer(RunConfig cfg);

  /// One optimizer update on `batch`; returns the loss before the update.
  /// Throws TrainingError (naming the batch ids) on a non-finite loss.
  double train_step(const Batch& batch);

  /// Trains for cfg.epochs (or cfg.max_steps), validating every
  /// cfg.val_every epochs when `val` is non-empty. The best validation F1
  /// weights are written to best_checkpoint if given.
  FitResult fit(const std::vector<data::BiTemporalPair>& train, const std::vector<data::BiTemporalPair>& val,
                const std::optional<std::filesystem::path>& best_checkpoint = std::nullopt, const LogFn& log = {});

  /// Total optimizer steps the lr schedule anneals over.
  void set_total_steps(std::int64_t total) { total_steps_ = total; }
  std::int64_t total_steps() const noexcept { return total_steps_; }
  std::int64_t step() const noexcept { return step_; }
  std::int64_t epoch() const noexcept { return epoch_; }
  double current_lr() const;

  denoiser::SMDNet& model() { return model_; }
  const diffusion::NoiseSchedule& schedule() const noexcept { return schedule_; }
  diffusion::TimestepPlan plan() const;
  const RunConfig& config() const noexcept { return cfg_; }
  at::Generator& generator() { return gen_; }

  void save(const std::filesystem::path& path) const;
  /// Restores model, optimizer, counters and random state.
  static Trainer resume(const std::filesystem::path& path);

 private:
  RunConfig cfg_;
  diffusion::NoiseSchedule schedule_;
  denoiser::SMDNet model_{nullptr};
  std::unique_ptr<torch::optim::AdamW> optimizer_;
  at::Generator gen_;
  std::int64_t step_ = 0;
  std::int64_t epoch_ = 0;
  std::int64_t total_steps_ = 1;
};

}  // namespace smdnet::training
