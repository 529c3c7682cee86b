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
#include "smdnet/objectives/losses.hpp"

#include "smdnet/errors.hpp"

namespace smdnet::objectives {

namespace {

void check_shapes(const torch::Tensor& pred, const torch::Tensor& gt, const char* what) {
  if (!pred.sizes().equals(gt.sizes())) throw ShapeError(std::string(what) + ": prediction and target shapes differ");
}

}  // namespace

torch::Tensor dice_loss(const torch::Tensor& pred, const torch::Tensor& gt) {
  check_shapes(pred, gt, "dice_loss");
  const auto batch = pred.dim() > 0 ? pred.size(0) : 1;
  auto p = pred.reshape({batch, -1});
  auto g = gt.to(pred.dtype()).reshape({batch, -1});
  auto inter = (p * g).sum(1);
  auto dice = (2.0 * inter + kDiceSmoothing) / (p.sum(1) + g.sum(1) + kDiceSmoothing);
  return (1.0 - dice).mean();
}

torch::Tensor bce_loss(const torch::Tensor& pred, const torch::Tensor& gt) {
  check_shapes(pred, gt, "bce_loss");
  auto p = pred.clamp(kBceClamp, 1.0 - kBceClamp);
  auto g = gt.to(pred.dtype());
  return -(g * p.log() + (1.0 - g) * (1.0 - p).log()).mean();
}

torch::Tensor total_loss(const torch::Tensor& x0hat, const torch::Tensor& gt) {
  auto pred = (x0hat + 1.0) * 0.5;
  return dice_loss(pred, gt) + bce_loss(pred, gt);
}

}  // namespace smdnet::objectives
