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
#include "smdnet/data/pair.hpp"

#include "smdnet/errors.hpp"

#include <sstream>
#include <utility>

namespace smdnet::data {

namespace {

std::string shape_str(const torch::Tensor& t) {
  std::ostringstream os;
  os << t.sizes();
  return os.str();
}

}  // namespace

void check_pair_tensors(const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& mask) {
  if (!t1.defined() || !t2.defined() || !mask.defined()) {
    throw ShapeError("bi-temporal pair: undefined tensor");
  }
  if (t1.dim() != 3 || t1.size(0) != 3) {
    throw ShapeError("bi-temporal pair: t1 must be [3, H, W], got " + shape_str(t1));
  }
  if (!t2.sizes().equals(t1.sizes())) {
    throw ShapeError("bi-temporal pair: t2 " + shape_str(t2) + " does not match t1 " + shape_str(t1));
  }
  if (mask.dim() != 3 || mask.size(0) != 1 || mask.size(1) != t1.size(1) || mask.size(2) != t1.size(2)) {
    throw ShapeError("bi-temporal pair: mask must be [1, H, W] matching t1, got " + shape_str(mask));
  }
  if (!mask.eq(0).logical_or(mask.eq(1)).all().item<bool>()) {
    throw DataError("bi-temporal pair: mask holds values other than 0 and 1");
  }
}

BiTemporalPair::BiTemporalPair(std::string id, torch::Tensor t1, torch::Tensor t2, torch::Tensor mask)
    : id_(std::move(id)),
      t1_(t1.to(torch::kFloat32).contiguous()),
      t2_(t2.to(torch::kFloat32).contiguous()),
      mask_(mask.to(torch::kFloat32).contiguous()) {
  check_pair_tensors(t1_, t2_, mask_);
}

double BiTemporalPair::change_density() const { return mask_.mean().item<double>(); }

}  // namespace smdnet::data
