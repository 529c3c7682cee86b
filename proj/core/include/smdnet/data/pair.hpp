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
#include <string>

namespace smdnet::data {

/// Co-registered pre/post images plus their binary change mask.
///
/// Layout: t1, t2 are float32 [3, H, W] in [0, 1]; mask is float32 [1, H, W]
/// holding only 0 (unchanged) and 1 (changed). The constructor enforces both
/// invariants, so every instance that exists is well-formed.
class BiTemporalPair {
 public:
  BiTemporalPair(std::string id, torch::Tensor t1, torch::Tensor t2, torch::Tensor mask);

  const std::string& id() const noexcept { return id_; }
  const torch::Tensor& t1() const noexcept { return t1_; }
  const torch::Tensor& t2() const noexcept { return t2_; }
  const torch::Tensor& mask() const noexcept { return mask_; }

  std::int64_t height() const { return mask_.size(1); }
  std::int64_t width() const { return mask_.size(2); }

  /// Fraction of changed pixels.
  double change_density() const;

 private:
  std::string id_;
  torch::Tensor t1_;
  torch::Tensor t2_;
  torch::Tensor mask_;
};

/// Throws ShapeError / DataError if the tensors violate the pair invariants.
void check_pair_tensors(const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& mask);

}  // namespace smdnet::data
