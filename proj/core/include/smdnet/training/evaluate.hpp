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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace smdnet::training {

struct EvalOptions {
  /// Seed of the per-pair initial noise; pair i uses seed + i.
  std::uint64_t noise_seed = 0;
  std::int64_t batch_size = 8;
  /// When set, writes <dir>/<id>.png triptychs: T1 | T2 | prediction vs GT
  /// (white = hit, red = false alarm, green = miss).
  std::optional<std::filesystem::path> figure_dir;
};

struct EvaluationResult {
  objectives::MetricsReport report;
  std::int64_t total_steps = 0;
  std::vector<std::int64_t> sub_steps;
  std::int64_t n_pairs = 0;

  /// Metrics plus sampling metadata, byte-stable for identical inputs.
  std::string to_json() const;
};

/// Samples masks for every pair with a deterministic (eta = 0) copy of
/// `plan`, sums confusion counts and derives micro-averaged metrics.
EvaluationResult evaluate(denoiser::SMDNet& model, const std::vector<data::BiTemporalPair>& pairs,
                          const diffusion::TimestepPlan& plan, const diffusion::NoiseSchedule& sched,
                          const EvalOptions& options = {});

/// Side-by-side T1 | T2 | overlay image, [3, H, 3W].
torch::Tensor make_triptych(const data::BiTemporalPair& pair, const torch::Tensor& pred_mask);

}  // namespace smdnet::training
