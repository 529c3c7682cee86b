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

#include <torch/torch.h>

namespace smdnet::objectives {

inline constexpr double kDiceSmoothing = 1.0;
inline constexpr double kBceClamp = 1e-7;

/// 1 - (2 * sum(pred * gt) + s) / (sum(pred) + sum(gt) + s) with s = 1,
/// computed per sample (leading dimension) and averaged over the batch.
torch::Tensor dice_loss(const torch::Tensor& pred, const torch::Tensor& gt);

/// Mean binary cross-entropy with pred clamped to [1e-7, 1 - 1e-7].
torch::Tensor bce_loss(const torch::Tensor& pred, const torch::Tensor& gt);

/// Dice + BCE on x0hat rescaled from [-1, 1] to [0, 1].
torch::Tensor total_loss(const torch::Tensor& x0hat, const torch::Tensor& gt);

}  // namespace smdnet::objectives
