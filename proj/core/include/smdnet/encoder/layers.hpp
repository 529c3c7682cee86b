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

#include <cstdint>

namespace smdnet::encoder {

inline constexpr std::int64_t kMinGroupWidth = 4;

/// Group count for GroupNorm: the largest divisor g <= 8 of `channels` with
/// channels / g >= kMinGroupWidth (1 if none).
std::int64_t norm_groups(std::int64_t channels);

/// 3x3 convolution (padding = dilation) -> GroupNorm -> ReLU.
class ConvNormActImpl : public torch::nn::Module {
 public:
  ConvNormActImpl(std::int64_t in_channels, std::int64_t out_channels, std::int64_t dilation = 1);

  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv_{nullptr};
  torch::nn::GroupNorm norm_{nullptr};
};
TORCH_MODULE(ConvNormAct);

/// Bilinear resize of `x` to the spatial size of `like`.
torch::Tensor upsample_like(const torch::Tensor& x, const torch::Tensor& like);

/// 2x max-pooling, ceil mode (odd sizes round up).
torch::Tensor downsample2x(const torch::Tensor& x);

}  // namespace smdnet::encoder
