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

#include "smdnet/data/pair.hpp"

#include <cstdint>
#include <vector>

namespace smdnet::data {

/// Desk-scale surrogate dataset: textured backgrounds with random shapes, a
/// second acquisition with shapes added or removed, and a global photometric
/// shift that must not be reported as change.
struct SyntheticConfig {
  std::int64_t n_pairs = 64;
  std::int64_t size = 64;          ///< square side in pixels, >= 16
  double change_fraction = 0.1;    ///< target fraction of changed pixels
  double photometric_jitter = 0.1; ///< brightness/hue shift amplitude on t2
  std::uint64_t seed = 0;

  void validate() const;
};

/// Pair ids are "syn_<index>". Reproducible bit-for-bit under a fixed seed.
std::vector<BiTemporalPair> generate_synthetic(const SyntheticConfig& cfg);

}  // namespace smdnet::data
