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
#include "smdnet/encoder/attention.hpp"

#include "smdnet/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace smdnet::encoder {

AttentionKind parse_attention_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "sa") return AttentionKind::kSA;
  if (lower == "eca") return AttentionKind::kECA;
  if (lower == "nl") return AttentionKind::kNL;
  if (lower == "ax") return AttentionKind::kAX;
  if (lower == "none") return AttentionKind::kNone;
  throw ConfigError("unknown attention kind '" + std::string(name) + "' (expected SA, ECA, NL, AX or none)");
}

std::string_view to_string(AttentionKind kind) {
  switch (kind) {
    case AttentionKind::kSA: return "SA";
    case AttentionKind::kECA: return "ECA";
    case AttentionKind::kNL: return "NL";
    case AttentionKind::kAX: return "AX";
    case AttentionKind::kNone: return "none";
  }
  return "?";
}

namespace {

torch::nn::Conv2d pointwise(std::int64_t in, std::int64_t out) {
  return torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 1));
}

}  // namespace

// --- spatial -------------------------------------------------------------

SpatialAttentionImpl::SpatialAttentionImpl() {
  conv_ = register_module("conv", torch::nn::Conv2d(torch::nn::Conv2dOptions(2, 1, kKernel).padding(kKernel / 2)));
}

torch::Tensor SpatialAttentionImpl::gate(const torch::Tensor& f) {
  const auto max_map = std::get<0>(f.max(1, /*keepdim=*/true));
  const auto mean_map = f.mean(1, /*keepdim=*/true);
  return torch::sigmoid(conv_(torch::cat({max_map, mean_map}, 1)));
}

torch::Tensor SpatialAttentionImpl::forward(const torch::Tensor& f) { return f * gate(f); }

// --- channel (ECA) -------------------------------------------------------

std::int64_t ChannelAttentionImpl::kernel_size_for(std::int64_t channels) {
  // |log2(C) / 2 + 1 / 2|, forced odd
  auto k = static_cast<std::int64_t>(std::abs(std::log2(static_cast<double>(channels)) / 2.0 + 0.5));
  if (k % 2 == 0) ++k;
  return std::max<std::int64_t>(k, 1);
}

ChannelAttentionImpl::ChannelAttentionImpl(std::int64_t channels) {
  const auto k = kernel_size_for(channels);
  conv_ = register_module("conv", torch::nn::Conv1d(torch::nn::Conv1dOptions(1, 1, k).padding(k / 2).bias(false)));
}

torch::Tensor ChannelAttentionImpl::forward(const torch::Tensor& f) {
  const auto b = f.size(0);
  const auto c = f.size(1);
  auto descriptor = f.mean({2, 3}).view({b, 1, c});
  auto weights = torch::sigmoid(conv_(descriptor)).view({b, c, 1, 1});
  return f * weights;
}

// --- non-local -----------------------------------------------------------

NonLocalImpl::NonLocalImpl(std::int64_t channels) {
  const auto inner = std::max<std::int64_t>(channels / 2, 1);
  theta_ = register_module("theta", pointwise(channels, inner));
  phi_ = register_module("phi", pointwise(channels, inner));
  g_ = register_module("g", pointwise(channels, inner));
  out_ = register_module("out", pointwise(inner, channels));
}

torch::Tensor NonLocalImpl::forward(const torch::Tensor& f) {
  if (f.size(2) > kMaxSide || f.size(3) > kMaxSide) return f;
  const auto b = f.size(0);
  auto theta = theta_(f).flatten(2).transpose(1, 2);  // [B, N, Ci]
  auto phi = phi_(f).flatten(2);                      // [B, Ci, N]
  auto g = g_(f).flatten(2).transpose(1, 2);          // [B, N, Ci]
  auto affinity = torch::softmax(torch::bmm(theta, phi), -1);
  auto y = torch::bmm(affinity, g).transpose(1, 2).reshape({b, -1, f.size(2), f.size(3)});
  return f + out_(y);
}

// --- axial ---------------------------------------------------------------

AxialAttentionImpl::AxialAttentionImpl(std::int64_t channels) : key_channels_(std::max<std::int64_t>(channels / 2, 1)) {
  q_h_ = register_module("q_h", pointwise(channels, key_channels_));
  k_h_ = register_module("k_h", pointwise(channels, key_channels_));
  v_h_ = register_module("v_h", pointwise(channels, channels));
  q_w_ = register_module("q_w", pointwise(channels, key_channels_));
  k_w_ = register_module("k_w", pointwise(channels, key_channels_));
  v_w_ = register_module("v_w", pointwise(channels, channels));
}

torch::Tensor AxialAttentionImpl::attend(const torch::Tensor& f, int axis) {
  const bool along_h = axis == 2;
  auto q = along_h ? q_h_(f) : q_w_(f);
  auto k = along_h ? k_h_(f) : k_w_(f);
  auto v = along_h ? v_h_(f) : v_w_(f);
  // Fold the other spatial axis into the batch: sequences of length L.
  const auto to_seq = [along_h](const torch::Tensor& t) {
    // [B, C, H, W] -> [B * W, H, C] (along H) or [B * H, W, C] (along W)
    auto p = along_h ? t.permute({0, 3, 2, 1}) : t.permute({0, 2, 3, 1});
    return p.reshape({-1, p.size(2), p.size(3)});
  };
  auto qs = to_seq(q);
  auto ks = to_seq(k);
  auto vs = to_seq(v);
  const double scale = 1.0 / std::sqrt(static_cast<double>(key_channels_));
  auto attn = torch::softmax(torch::bmm(qs, ks.transpose(1, 2)) * scale, -1);
  auto out = torch::bmm(attn, vs);  // [B * other, L, C]
  const auto b = f.size(0);
  const auto c = f.size(1);
  const auto h = f.size(2);
  const auto w = f.size(3);
  torch::Tensor back = along_h ? out.view({b, w, h, c}).permute({0, 3, 2, 1}) : out.view({b, h, w, c}).permute({0, 3, 1, 2});
  return f + back.contiguous();
}

torch::Tensor AxialAttentionImpl::forward(const torch::Tensor& f) { return attend(attend(f, 2), 3); }

// --- dispatch ------------------------------------------------------------

AttentionGateImpl::AttentionGateImpl(AttentionKind kind, std::int64_t channels) : kind_(kind) {
  if (channels < 1) throw ConfigError("attention: channel count must be >= 1");
  switch (kind_) {
    case AttentionKind::kSA: sa_ = register_module("sa", SpatialAttention()); break;
    case AttentionKind::kECA: eca_ = register_module("eca", ChannelAttention(channels)); break;
    case AttentionKind::kNL: nl_ = register_module("nl", NonLocal(channels)); break;
    case AttentionKind::kAX: ax_ = register_module("ax", AxialAttention(channels)); break;
    case AttentionKind::kNone: break;
  }
}

torch::Tensor AttentionGateImpl::forward(const torch::Tensor& f) {
  switch (kind_) {
    case AttentionKind::kSA: return sa_(f);
    case AttentionKind::kECA: return eca_(f);
    case AttentionKind::kNL: return nl_(f);
    case AttentionKind::kAX: return ax_(f);
    case AttentionKind::kNone: return f;
  }
  throw ConfigError("attention: unhandled kind");
}

}  // namespace smdnet::encoder
