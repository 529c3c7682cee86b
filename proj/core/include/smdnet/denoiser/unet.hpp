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

#include "smdnet/encoder/siamese.hpp"

#include <torch/torch.h>

#include <cstdint>
#include <vector>

namespace smdnet::denoiser {

using encoder::FeaturePyramid;

struct DenoiserConfig {
  int n_layers = 4;
  std::vector<std::int64_t> channels;
  std::int64_t time_embed_dim = 128;
  /// T1 (3) + T2 (3) + x_t (1).
  std::int64_t in_channels = 7;

  /// Mirrors the encoder so that additive fusion is shape-legal per level.
  static DenoiserConfig matching(const encoder::EncoderConfig& enc, std::int64_t time_embed_dim = 128);
  void validate() const;
};

/// Raw sinusoidal code of integer steps t ([B]) as [B, dim], laid out as
/// interleaved (sin(t * w_k), cos(t * w_k)) with w_k = 10000^(-2k/dim).
/// Throws ConfigError when dim is odd.
torch::Tensor sinusoidal_embedding(const torch::Tensor& t, std::int64_t dim);

/// Sinusoid followed by Linear -> SiLU -> Linear.
class TimestepEmbeddingImpl : public torch::nn::Module {
 public:
  explicit TimestepEmbeddingImpl(std::int64_t dim);
  torch::Tensor forward(const torch::Tensor& t);
  std::int64_t dim() const noexcept { return dim_; }

 private:
  std::int64_t dim_;
  torch::nn::Linear fc1_{nullptr}, fc2_{nullptr};
};
TORCH_MODULE(TimestepEmbedding);

/// conv3x3-GN-ReLU-conv3x3-GN plus (projected) identity, then ReLU.
class ResidualBlockImpl : public torch::nn::Module {
 public:
  ResidualBlockImpl(std::int64_t in_channels, std::int64_t out_channels);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr}, skip_{nullptr};
  torch::nn::GroupNorm norm1_{nullptr}, norm2_{nullptr};
};
TORCH_MODULE(ResidualBlock);

/// Denoising U-Net. Encoder level i yields I_S,i (+ projected time code);
/// the fused map I_S,i + f_hat_i feeds the decoder skip at that level. The
/// head predicts x0 in [-1, 1] through tanh.
class DenoisingUNetImpl : public torch::nn::Module {
 public:
  explicit DenoisingUNetImpl(DenoiserConfig cfg);

  /// input: [B, 7, H, W]; t: int64 [B]; condition may be null (unconditional).
  torch::Tensor forward(const torch::Tensor& input, const torch::Tensor& t, const FeaturePyramid* condition);

  const DenoiserConfig& config() const noexcept { return cfg_; }

 private:
  DenoiserConfig cfg_;
  TimestepEmbedding time_{nullptr};
  torch::nn::ModuleList enc_{nullptr};
  torch::nn::ModuleList time_proj_{nullptr};
  ResidualBlock middle_{nullptr};
  torch::nn::ModuleList dec_{nullptr};  // dec_[i] produces decoder level i, i < n-1
  torch::nn::Conv2d head_{nullptr};
};
TORCH_MODULE(DenoisingUNet);

}  // namespace smdnet::denoiser
