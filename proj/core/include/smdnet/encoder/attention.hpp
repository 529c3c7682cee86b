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
#include <string_view>

namespace smdnet::encoder {

enum class AttentionKind { kSA, kECA, kNL, kAX, kNone };

/// "SA", "ECA", "NL", "AX", "none" (case-insensitive). Throws ConfigError.
AttentionKind parse_attention_kind(std::string_view name);
std::string_view to_string(AttentionKind kind);

/// Gate from channel-wise max and mean maps -> 7x7 conv -> sigmoid,
/// broadcast-multiplied over channels.
class SpatialAttentionImpl : public torch::nn::Module {
 public:
  static constexpr std::int64_t kKernel = 7;

  SpatialAttentionImpl();

  /// [B, 1, H, W] gate in (0, 1).
  torch::Tensor gate(const torch::Tensor& f);
  torch::Tensor forward(const torch::Tensor& f);

 private:
  torch::nn::Conv2d conv_{nullptr};
};
TORCH_MODULE(SpatialAttention);

/// Efficient channel attention: 1D conv across the globally averaged
/// channel descriptor, kernel size adapted to the channel count.
class ChannelAttentionImpl : public torch::nn::Module {
 public:
  explicit ChannelAttentionImpl(std::int64_t channels);

  static std::int64_t kernel_size_for(std::int64_t channels);
  torch::Tensor forward(const torch::Tensor& f);

 private:
  torch::nn::Conv1d conv_{nullptr};
};
TORCH_MODULE(ChannelAttention);

/// Embedded-Gaussian non-local block with a residual connection. Maps with
/// a side larger than max_side pass through unchanged.
class NonLocalImpl : public torch::nn::Module {
 public:
  static constexpr std::int64_t kMaxSide = 32;

  explicit NonLocalImpl(std::int64_t channels);
  torch::Tensor forward(const torch::Tensor& f);

 private:
  torch::nn::Conv2d theta_{nullptr}, phi_{nullptr}, g_{nullptr}, out_{nullptr};
};
TORCH_MODULE(NonLocal);

/// Single-head self-attention along H, then along W, each residual.
class AxialAttentionImpl : public torch::nn::Module {
 public:
  explicit AxialAttentionImpl(std::int64_t channels);
  torch::Tensor forward(const torch::Tensor& f);

 private:
  torch::Tensor attend(const torch::Tensor& f, int axis);

  std::int64_t key_channels_;
  torch::nn::Conv2d q_h_{nullptr}, k_h_{nullptr}, v_h_{nullptr};
  torch::nn::Conv2d q_w_{nullptr}, k_w_{nullptr}, v_w_{nullptr};
};
TORCH_MODULE(AxialAttention);

/// Shape-preserving attention dispatch over AttentionKind.
class AttentionGateImpl : public torch::nn::Module {
 public:
  AttentionGateImpl(AttentionKind kind, std::int64_t channels);

  torch::Tensor forward(const torch::Tensor& f);
  AttentionKind kind() const noexcept { return kind_; }

 private:
  AttentionKind kind_;
  SpatialAttention sa_{nullptr};
  ChannelAttention eca_{nullptr};
  NonLocal nl_{nullptr};
  AxialAttention ax_{nullptr};
};
TORCH_MODULE(AttentionGate);

}  // namespace smdnet::encoder
