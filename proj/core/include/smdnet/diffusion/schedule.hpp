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
#include <span>
#include <string_view>
#include <vector>

namespace smdnet::diffusion {

enum class ScheduleKind { kLinear };

ScheduleKind parse_schedule_kind(std::string_view name);
std::string_view to_string(ScheduleKind kind);

/// beta_t, alpha_t = 1 - beta_t and alpha_bar_t = prod_{s<=t} alpha_s for
/// t = 1..T, with alpha_bar_0 = 1. All values are kept in double precision.
class NoiseSchedule {
 public:
  /// Linear betas from beta_start to beta_end inclusive.
  static NoiseSchedule linear(std::int64_t steps, double beta_start = 1e-4, double beta_end = 2e-2);

  std::int64_t steps() const noexcept { return steps_; }

  /// t in [1, T].
  double beta(std::int64_t t) const;
  double alpha(std::int64_t t) const;
  /// t in [0, T].
  double alpha_bar(std::int64_t t) const;

  /// alpha_bar_0 .. alpha_bar_T.
  std::span<const double> alpha_bars() const noexcept { return alpha_bar_; }

  /// alpha_bar gathered at integer steps t (any shape), as float64.
  torch::Tensor alpha_bar_at(const torch::Tensor& t) const;

 private:
  explicit NoiseSchedule(std::vector<double> betas);

  std::int64_t steps_ = 0;
  std::vector<double> beta_;       // index 0 unused
  std::vector<double> alpha_;      // index 0 unused
  std::vector<double> alpha_bar_;  // index 0 == 1
  torch::Tensor alpha_bar_table_;
};

/// T >= 1 required; throws DomainError otherwise.
NoiseSchedule make_schedule(std::int64_t steps, ScheduleKind kind = ScheduleKind::kLinear);

}  // namespace smdnet::diffusion
