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

#include "smdnet/encoder/layers.hpp"

#include <torch/torch.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace smdnet::encoder {

struct RSUConfig {
  int depth = 7;
  std::int64_t in_channels = 3;
  std::int64_t mid_channels = 16;
  std::int64_t out_channels = 64;
  /// Dilated ("F") variant: no resampling, dilation 1, 2, 4, ... instead.
  bool dilated = false;

  void validate() const;
  /// Smallest input side the internal U can halve without vanishing.
  std::int64_t min_spatial() const;
  /// "RSU-7", "RSU-4F", ...
  std::string name() const;
};

/// Residual U-block: out = U(in_proj(x)) + in_proj(x), where U is a
/// depth-D encoder/decoder with skip concatenations.
class RSUImpl : public torch::nn::Module {
 public:
  explicit RSUImpl(RSUConfig cfg);

  torch::Tensor forward(const torch::Tensor& x);

  /// Same as forward, also recording the [H, W] of every internal stage
  /// (encoder levels, bottleneck, decoder levels) in evaluation order.
  torch::Tensor forward_traced(const torch::Tensor& x, std::vector<std::array<std::int64_t, 2>>& stage_sizes);

  const RSUConfig& config() const noexcept { return cfg_; }

 private:
  torch::Tensor run(const torch::Tensor& x, std::vector<std::array<std::int64_t, 2>>* trace);

  RSUConfig cfg_;
  ConvNormAct in_proj_{nullptr};
  torch::nn::ModuleList encoder_{nullptr};
  ConvNormAct bottom_{nullptr};
  torch::nn::ModuleList decoder_{nullptr};  // decoder_[k] produces level k+1
};
TORCH_MODULE(RSU);

}  // namespace smdnet::encoder
