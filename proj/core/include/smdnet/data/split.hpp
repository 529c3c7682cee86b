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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace smdnet::data {

struct SplitConfig {
  double train_ratio = 0.75;
  double test_ratio = 0.2;
  double val_ratio = 0.05;
  std::uint64_t seed = 0;

  /// Ratios must be nonnegative and sum to 1 within 1e-9.
  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::size_t> val;
};

/// Seeded shuffle of [0, n) partitioned into round(n * test) test items,
/// round(n * val) validation items and the remainder for training.
SplitIndices split_indices(std::size_t n, const SplitConfig& cfg);

struct DatasetSplit {
  std::vector<BiTemporalPair> train;
  std::vector<BiTemporalPair> test;
  std::vector<BiTemporalPair> val;
};

DatasetSplit split_dataset(const std::vector<BiTemporalPair>& tiles, const SplitConfig& cfg);

/// {"train": [ids], "test": [ids], "val": [ids], "seed": n}
std::string split_manifest_json(const DatasetSplit& split, std::uint64_t seed);
void write_split_manifest(const std::filesystem::path& path, const DatasetSplit& split, std::uint64_t seed);

}  // namespace smdnet::data
