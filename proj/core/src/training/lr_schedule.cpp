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
#include "smdnet/training/lr_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smdnet::training {

double lr_at(std::int64_t step, std::int64_t total_steps, double peak_lr, double warmup_fraction) {
  if (total_steps <= 0) return peak_lr;
  const double s = static_cast<double>(std::clamp<std::int64_t>(step, 0, total_steps));
  const double total = static_cast<double>(total_steps);
  const double warmup = warmup_fraction * total;
  if (s < warmup) return peak_lr * s / warmup;
  const double span = total - warmup;
  const double progress = span > 0.0 ? std::clamp((s - warmup) / span, 0.0, 1.0) : 1.0;
  return std::max(0.0, peak_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * progress)));
}

}  // namespace smdnet::training
