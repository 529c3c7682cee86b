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
#include "smdnet/encoder/layers.hpp"

namespace smdnet::encoder {

namespace F = torch::nn::functional;

std::int64_t norm_groups(std::int64_t channels) {
  // At least kMinGroupWidth channels per group: the innermost RSU stages run
  // at 1x1, where a one-channel group normalizes to a constant and stops
  // passing gradient.
  for (std::int64_t g = 8; g > 1; --g) {
    if (channels % g == 0 && channels / g >= kMinGroupWidth) return g;
  }
  return 1;
}

ConvNormActImpl::ConvNormActImpl(std::int64_t in_channels, std::int64_t out_channels, std::int64_t dilation) {
  conv_ = register_module(
      "conv", torch::nn::Conv2d(
                  torch::nn::Conv2dOptions(in_channels, out_channels, 3).padding(dilation).dilation(dilation).bias(false)));
  norm_ = register_module("norm", torch::nn::GroupNorm(torch::nn::GroupNormOptions(norm_groups(out_channels), out_channels)));
}

torch::Tensor ConvNormActImpl::forward(const torch::Tensor& x) { return torch::relu(norm_(conv_(x))); }

torch::Tensor upsample_like(const torch::Tensor& x, const torch::Tensor& like) {
  if (x.size(2) == like.size(2) && x.size(3) == like.size(3)) return x;
  return F::interpolate(x, F::InterpolateFuncOptions()
                               .size(std::vector<std::int64_t>{like.size(2), like.size(3)})
                               .mode(torch::kBilinear)
                               .align_corners(false));
}

torch::Tensor downsample2x(const torch::Tensor& x) {
  return F::max_pool2d(x, F::MaxPool2dFuncOptions(2).stride(2).ceil_mode(true));
}

}  // namespace smdnet::encoder
