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

#include "smdnet/denoiser/model.hpp"
#include "smdnet/training/config.hpp"

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <optional>

namespace smdnet::training {

/// Contents of a single-file checkpoint archive.
///
///   config      YAML echo of the RunConfig
///   model/      SMDNet parameters and buffers
///   optimizer/  AdamW state (absent in weights-only files)
///   epoch, step counters; rng_state generator state
struct CheckpointMeta {
  RunConfig config;
  std::int64_t epoch = 0;
  std::int64_t step = 0;
  std::optional<torch::Tensor> rng_state;
};

void save_checkpoint(const std::filesystem::path& path, const CheckpointMeta& meta, denoiser::SMDNet& model,
                     const torch::optim::Optimizer* optimizer);

struct LoadedModel {
  CheckpointMeta meta;
  denoiser::SMDNet model{nullptr};
};

/// Rebuilds the model from the config echo and loads its weights.
LoadedModel load_model(const std::filesystem::path& path);

/// Reads metadata only.
CheckpointMeta read_checkpoint_meta(const std::filesystem::path& path);

/// Loads optimizer state saved alongside the model.
void load_optimizer_state(const std::filesystem::path& path, torch::optim::Optimizer& optimizer);

/// Copies only the Siamese encoder weights from a checkpoint into `model`.
void load_encoder_weights(const std::filesystem::path& path, denoiser::SMDNet& model);

}  // namespace smdnet::training
