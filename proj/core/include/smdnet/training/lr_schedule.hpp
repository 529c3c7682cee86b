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

#include <cstdint>

namespace smdnet::training {

/// Linear warm-up from 0 to peak over the first warmup_fraction of
/// total_steps, then cosine annealing to 0 at total_steps.
double lr_at(std::int64_t step, std::int64_t total_steps, double peak_lr, double warmup_fraction);

}  // namespace smdnet::training
