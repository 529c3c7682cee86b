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
#include "smdnet/data/split.hpp"

#include "smdnet/errors.hpp"
#include "smdnet/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace smdnet::data {

void SplitConfig::validate() const {
  if (train_ratio < 0 || test_ratio < 0 || val_ratio < 0) {
    throw ConfigError("split ratios must be nonnegative");
  }
  if (std::abs(train_ratio + test_ratio + val_ratio - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
}

SplitIndices split_indices(std::size_t n, const SplitConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  PortableRng rng(cfg.seed);
  rng.shuffle(std::span<std::size_t>(order));

  const auto count = [n](double ratio) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio));
  };
  const std::size_t n_test = std::min(count(cfg.test_ratio), n);
  const std::size_t n_val = std::min(count(cfg.val_ratio), n - n_test);

  SplitIndices out;
  out.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test),
                 order.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
  out.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), order.end());
  return out;
}

DatasetSplit split_dataset(const std::vector<BiTemporalPair>& tiles, const SplitConfig& cfg) {
  if (tiles.empty()) throw ConfigError("split_dataset: no tiles to split");
  const auto idx = split_indices(tiles.size(), cfg);
  DatasetSplit out;
  const auto gather = [&](const std::vector<std::size_t>& from, std::vector<BiTemporalPair>& to) {
    to.reserve(from.size());
    for (auto i : from) to.push_back(tiles[i]);
  };
  gather(idx.train, out.train);
  gather(idx.test, out.test);
  gather(idx.val, out.val);
  return out;
}

std::string split_manifest_json(const DatasetSplit& split, std::uint64_t seed) {
  const auto ids = [](const std::vector<BiTemporalPair>& pairs) {
    std::vector<std::string> v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(p.id());
    return v;
  };
  nlohmann::ordered_json j;
  j["train"] = ids(split.train);
  j["test"] = ids(split.test);
  j["val"] = ids(split.val);
  j["seed"] = seed;
  return j.dump(2);
}

void write_split_manifest(const std::filesystem::path& path, const DatasetSplit& split, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write split manifest: " + path.string());
  out << split_manifest_json(split, seed) << '\n';
}

}  // namespace smdnet::data
