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
#include "smdnet/denoiser/unet.hpp"

#include "smdnet/encoder/layers.hpp"
#include "smdnet/errors.hpp"

#include <cmath>
#include <sstream>

namespace smdnet::denoiser {

DenoiserConfig DenoiserConfig::matching(const encoder::EncoderConfig& enc, std::int64_t time_embed_dim) {
  DenoiserConfig cfg;
  cfg.n_layers = enc.n_layers;
  cfg.channels = enc.channels;
  cfg.time_embed_dim = time_embed_dim;
  return cfg;
}

void DenoiserConfig::validate() const {
  if (n_layers < 1) throw ConfigError("denoiser: n_layers must be >= 1");
  if (channels.size() != static_cast<std::size_t>(n_layers)) {
    throw ConfigError("denoiser: channels list length must equal n_layers");
  }
  for (auto c : channels) {
    if (c < 1) throw ConfigError("denoiser: channel counts must be >= 1");
  }
  if (time_embed_dim < 2 || time_embed_dim % 2 != 0) {
    throw ConfigError("denoiser: time_embed_dim must be even and >= 2");
  }
  if (in_channels < 1) throw ConfigError("denoiser: in_channels must be >= 1");
}

torch::Tensor sinusoidal_embedding(const torch::Tensor& t, std::int64_t dim) {
  if (dim < 2 || dim % 2 != 0) throw ConfigError("timestep embedding: dim must be even, got " + std::to_string(dim));
  const auto half = dim / 2;
  auto k = torch::arange(half, torch::TensorOptions().dtype(torch::kFloat64));
  auto freqs = torch::exp(-std::log(10000.0) * 2.0 * k / static_cast<double>(dim));
  auto args = t.to(torch::kFloat64).reshape({-1, 1}) * freqs.reshape({1, -1});  // [B, half]
  // interleave: (sin w0 t, cos w0 t, sin w1 t, cos w1 t, ...)
  auto code = torch::stack({args.sin(), args.cos()}, -1).reshape({-1, dim});
  return code.to(torch::kFloat32);
}

TimestepEmbeddingImpl::TimestepEmbeddingImpl(std::int64_t dim) : dim_(dim) {
  if (dim < 2 || dim % 2 != 0) throw ConfigError("timestep embedding: dim must be even, got " + std::to_string(dim));
  fc1_ = register_module("fc1", torch::nn::Linear(dim, dim));
  fc2_ = register_module("fc2", torch::nn::Linear(dim, dim));
}

torch::Tensor TimestepEmbeddingImpl::forward(const torch::Tensor& t) {
  return fc2_(torch::silu(fc1_(sinusoidal_embedding(t, dim_))));
}

ResidualBlockImpl::ResidualBlockImpl(std::int64_t in_channels, std::int64_t out_channels) {
  using torch::nn::Conv2dOptions;
  using torch::nn::GroupNormOptions;
  conv1_ = register_module("conv1", torch::nn::Conv2d(Conv2dOptions(in_channels, out_channels, 3).padding(1).bias(false)));
  norm1_ = register_module("norm1", torch::nn::GroupNorm(GroupNormOptions(encoder::norm_groups(out_channels), out_channels)));
  conv2_ = register_module("conv2", torch::nn::Conv2d(Conv2dOptions(out_channels, out_channels, 3).padding(1).bias(false)));
  norm2_ = register_module("norm2", torch::nn::GroupNorm(GroupNormOptions(encoder::norm_groups(out_channels), out_channels)));
  if (in_channels != out_channels) {
    skip_ = register_module("skip", torch::nn::Conv2d(Conv2dOptions(in_channels, out_channels, 1).bias(false)));
  }
}

torch::Tensor ResidualBlockImpl::forward(const torch::Tensor& x) {
  auto h = torch::relu(norm1_(conv1_(x)));
  h = norm2_(conv2_(h));
  return torch::relu(h + (skip_ ? skip_(x) : x));
}

DenoisingUNetImpl::DenoisingUNetImpl(DenoiserConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const auto n = static_cast<std::size_t>(cfg_.n_layers);
  time_ = register_module("time", TimestepEmbedding(cfg_.time_embed_dim));
  enc_ = register_module("enc", torch::nn::ModuleList());
  time_proj_ = register_module("time_proj", torch::nn::ModuleList());
  dec_ = register_module("dec", torch::nn::ModuleList());
  for (std::size_t i = 0; i < n; ++i) {
    enc_->push_back(ResidualBlock(i == 0 ? cfg_.in_channels : cfg_.channels[i - 1], cfg_.channels[i]));
    time_proj_->push_back(torch::nn::Linear(cfg_.time_embed_dim, cfg_.channels[i]));
  }
  middle_ = register_module("middle", ResidualBlock(cfg_.channels[n - 1], cfg_.channels[n - 1]));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dec_->push_back(ResidualBlock(cfg_.channels[i + 1] + cfg_.channels[i], cfg_.channels[i]));
  }
  head_ = register_module("head", torch::nn::Conv2d(torch::nn::Conv2dOptions(cfg_.channels[0], 1, 1)));
}

torch::Tensor DenoisingUNetImpl::forward(const torch::Tensor& input, const torch::Tensor& t,
                                         const FeaturePyramid* condition) {
  if (input.dim() != 4 || input.size(1) != cfg_.in_channels) {
    throw ShapeError("denoiser: expected [B, " + std::to_string(cfg_.in_channels) + ", H, W] input");
  }
  const auto n = static_cast<std::size_t>(cfg_.n_layers);
  if (condition != nullptr && condition->size() != n) {
    throw ConfigError("denoiser: conditioning pyramid has " + std::to_string(condition->size()) + " levels, expected " +
                      std::to_string(n));
  }
  const auto temb = time_(t);

  std::vector<torch::Tensor> fused;
  fused.reserve(n);
  torch::Tensor h = input;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) h = encoder::downsample2x(h);
    h = enc_[i]->as<ResidualBlock>()->forward(h);
    h = h + time_proj_[i]->as<torch::nn::Linear>()->forward(temb).unsqueeze(-1).unsqueeze(-1);
    if (condition != nullptr) {
      const auto& f = (*condition)[i];
      if (!f.sizes().equals(h.sizes())) {
        std::ostringstream msg;
        msg << "denoiser: conditioning level " << i << " has shape " << f.sizes() << ", expected " << h.sizes();
        throw ConfigError(msg.str());
      }
      fused.push_back(h + f);
    } else {
      fused.push_back(h);
    }
  }

  auto d = middle_(fused[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    d = dec_[i]->as<ResidualBlock>()->forward(torch::cat({encoder::upsample_like(d, fused[i]), fused[i]}, 1));
  }
  return torch::tanh(head_(d));
}

}  // namespace smdnet::denoiser
