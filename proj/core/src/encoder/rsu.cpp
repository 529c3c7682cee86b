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
#include "smdnet/encoder/rsu.hpp"

#include "smdnet/errors.hpp"

namespace smdnet::encoder {

void RSUConfig::validate() const {
  if (depth < 2) throw ConfigError(name() + ": depth must be >= 2");
  if (in_channels < 1 || mid_channels < 1 || out_channels < 1) {
    throw ConfigError(name() + ": channel counts must be >= 1");
  }
}

std::int64_t RSUConfig::min_spatial() const { return dilated ? 1 : std::int64_t{1} << (depth - 2); }

std::string RSUConfig::name() const { return "RSU-" + std::to_string(depth) + (dilated ? "F" : ""); }

RSUImpl::RSUImpl(RSUConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  const auto mid = cfg_.mid_channels;
  const int levels = cfg_.depth - 1;  // encoder stages above the bottleneck
  // dilation of encoder level k (1-based) in the F variant
  const auto rate = [&](int k) -> std::int64_t { return cfg_.dilated ? std::int64_t{1} << (k - 1) : 1; };

  in_proj_ = register_module("in_proj", ConvNormAct(cfg_.in_channels, cfg_.out_channels));
  encoder_ = register_module("encoder", torch::nn::ModuleList());
  decoder_ = register_module("decoder", torch::nn::ModuleList());
  for (int k = 1; k <= levels; ++k) {
    encoder_->push_back(ConvNormAct(k == 1 ? cfg_.out_channels : mid, mid, rate(k)));
  }
  bottom_ = register_module("bottom", ConvNormAct(mid, mid, cfg_.dilated ? rate(cfg_.depth) : 2));
  for (int k = 1; k <= levels; ++k) {
    decoder_->push_back(ConvNormAct(2 * mid, k == 1 ? cfg_.out_channels : mid, rate(k)));
  }
}

torch::Tensor RSUImpl::forward(const torch::Tensor& x) { return run(x, nullptr); }

torch::Tensor RSUImpl::forward_traced(const torch::Tensor& x, std::vector<std::array<std::int64_t, 2>>& stage_sizes) {
  stage_sizes.clear();
  return run(x, &stage_sizes);
}

torch::Tensor RSUImpl::run(const torch::Tensor& x, std::vector<std::array<std::int64_t, 2>>* trace) {
  if (x.dim() != 4 || x.size(1) != cfg_.in_channels) {
    throw ShapeError(cfg_.name() + ": expected [B, " + std::to_string(cfg_.in_channels) + ", H, W] input");
  }
  const auto side = std::min(x.size(2), x.size(3));
  if (side < cfg_.min_spatial()) {
    throw ConfigError(cfg_.name() + " needs spatial size >= " + std::to_string(cfg_.min_spatial()) + ", got " +
                      std::to_string(x.size(2)) + "x" + std::to_string(x.size(3)));
  }
  const auto record = [trace](const torch::Tensor& t) {
    if (trace != nullptr) trace->push_back({t.size(2), t.size(3)});
  };

  const auto residual = in_proj_(x);
  const int levels = cfg_.depth - 1;
  std::vector<torch::Tensor> skips;
  skips.reserve(static_cast<std::size_t>(levels));
  torch::Tensor h = residual;
  for (int k = 0; k < levels; ++k) {
    if (k > 0 && !cfg_.dilated) h = downsample2x(h);
    h = encoder_[static_cast<std::size_t>(k)]->as<ConvNormAct>()->forward(h);
    record(h);
    skips.push_back(h);
  }
  torch::Tensor d = bottom_(h);
  record(d);
  for (int k = levels - 1; k >= 0; --k) {
    const auto& skip = skips[static_cast<std::size_t>(k)];
    d = decoder_[static_cast<std::size_t>(k)]->as<ConvNormAct>()->forward(torch::cat({upsample_like(d, skip), skip}, 1));
    record(d);
  }
  return d + residual;
}

}  // namespace smdnet::encoder
