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
#include "smdnet/diffusion/schedule.hpp"

#include "smdnet/errors.hpp"

#include <string>

namespace smdnet::diffusion {

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "linear") return ScheduleKind::kLinear;
  throw ConfigError("unknown noise schedule kind '" + std::string(name) + "'");
}

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kLinear: return "linear";
  }
  return "?";
}

NoiseSchedule::NoiseSchedule(std::vector<double> betas) : steps_(static_cast<std::int64_t>(betas.size())) {
  beta_.reserve(betas.size() + 1);
  alpha_.reserve(betas.size() + 1);
  alpha_bar_.reserve(betas.size() + 1);
  beta_.push_back(0.0);
  alpha_.push_back(1.0);
  alpha_bar_.push_back(1.0);
  for (double b : betas) {
    if (!(b > 0.0 && b < 1.0)) throw DomainError("noise schedule: beta must lie in (0, 1)");
    beta_.push_back(b);
    alpha_.push_back(1.0 - b);
    alpha_bar_.push_back(alpha_bar_.back() * (1.0 - b));
  }
  alpha_bar_table_ =
      torch::from_blob(alpha_bar_.data(), {static_cast<std::int64_t>(alpha_bar_.size())}, torch::kFloat64).clone();
}

NoiseSchedule NoiseSchedule::linear(std::int64_t steps, double beta_start, double beta_end) {
  if (steps < 1) throw DomainError("noise schedule: T must be >= 1");
  std::vector<double> betas(static_cast<std::size_t>(steps));
  for (std::int64_t i = 0; i < steps; ++i) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
    betas[static_cast<std::size_t>(i)] = beta_start + (beta_end - beta_start) * frac;
  }
  return NoiseSchedule(std::move(betas));
}

double NoiseSchedule::beta(std::int64_t t) const {
  if (t < 1 || t > steps_) throw DomainError("beta: step " + std::to_string(t) + " outside [1, T]");
  return beta_[static_cast<std::size_t>(t)];
}

double NoiseSchedule::alpha(std::int64_t t) const {
  if (t < 1 || t > steps_) throw DomainError("alpha: step " + std::to_string(t) + " outside [1, T]");
  return alpha_[static_cast<std::size_t>(t)];
}

double NoiseSchedule::alpha_bar(std::int64_t t) const {
  if (t < 0 || t > steps_) throw DomainError("alpha_bar: step " + std::to_string(t) + " outside [0, T]");
  return alpha_bar_[static_cast<std::size_t>(t)];
}

torch::Tensor NoiseSchedule::alpha_bar_at(const torch::Tensor& t) const {
  auto idx = t.to(torch::kInt64);
  if (idx.numel() > 0 && (idx.min().item<std::int64_t>() < 0 || idx.max().item<std::int64_t>() > steps_)) {
    throw DomainError("alpha_bar: step outside [0, T]");
  }
  return alpha_bar_table_.index({idx});
}

NoiseSchedule make_schedule(std::int64_t steps, ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kLinear: return NoiseSchedule::linear(steps);
  }
  throw ConfigError("unhandled schedule kind");
}

}  // namespace smdnet::diffusion
