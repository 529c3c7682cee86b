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

#include "smdnet/data/split.hpp"
#include "smdnet/data/synthetic.hpp"
#include "smdnet/denoiser/model.hpp"
#include "smdnet/diffusion/schedule.hpp"
#include "smdnet/encoder/attention.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace smdnet::training {

enum class Objective {
  kX0DiceBce,  ///< "x0_dice_bce": Dice + BCE on the predicted clean mask
  kEpsMse,     ///< "eps_mse": MSE between true and reconstructed noise
};

Objective parse_objective(std::string_view name);
std::string_view to_string(Objective objective);

/// Everything a run needs. Field names match the YAML keys.
struct RunConfig {
  // optimization
  std::int64_t batch_size = 8;
  double lr = 1e-4;
  double weight_decay = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double warmup_fraction = 0.01;
  std::int64_t epochs = 200;
  std::int64_t val_every = 10;
  std::int64_t max_steps = 0;  ///< 0 = epochs * batches_per_epoch

  // diffusion
  std::int64_t T = 1000;
  diffusion::ScheduleKind schedule = diffusion::ScheduleKind::kLinear;
  std::int64_t n_sub_steps = 10;
  double eta = 0.0;

  // architecture
  int n_layers = 6;
  std::vector<std::int64_t> channels;  ///< empty = layer-depth preset
  encoder::AttentionKind attention_kind = encoder::AttentionKind::kSA;
  std::int64_t time_embed_dim = 128;

  Objective objective = Objective::kX0DiceBce;
  bool freeze_encoder = false;
  std::uint64_t seed = 0;
  int threads = 0;  ///< 0 = libtorch default

  // data
  std::int64_t tile_size = 256;
  std::int64_t tile_stride = 256;
  data::SplitConfig split;
  data::SyntheticConfig synthetic;

  void validate() const;

  encoder::EncoderConfig encoder_config() const;
  denoiser::ModelConfig model_config() const;
};

RunConfig load_run_config(const std::filesystem::path& path);
/// Parses YAML text; unknown keys and bad enum names raise ConfigError.
RunConfig parse_run_config(const std::string& yaml);
std::string to_yaml(const RunConfig& cfg);

}  // namespace smdnet::training
