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
#include "smdnet/data/tiling.hpp"

#include "smdnet/errors.hpp"

namespace smdnet::data {

std::vector<TileOrigin> tile_grid(std::int64_t height, std::int64_t width, std::int64_t tile_size,
                                  std::int64_t stride) {
  if (tile_size < 1 || stride < 1) {
    throw ConfigError("tile_grid: tile_size and stride must be >= 1");
  }
  std::vector<TileOrigin> origins;
  if (height < tile_size || width < tile_size) return origins;
  const std::int64_t rows = (height - tile_size) / stride + 1;
  const std::int64_t cols = (width - tile_size) / stride + 1;
  origins.reserve(static_cast<std::size_t>(rows * cols));
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) {
      origins.push_back({r, c, r * stride, c * stride});
    }
  }
  return origins;
}

TilingResult tile_pair(const BiTemporalPair& pair, std::int64_t tile_size, std::int64_t stride) {
  TilingResult result;
  const auto origins = tile_grid(pair.height(), pair.width(), tile_size, stride);
  if (origins.empty()) {
    result.warnings.push_back("pair '" + pair.id() + "' (" + std::to_string(pair.height()) + "x" +
                              std::to_string(pair.width()) + ") is smaller than tile size " +
                              std::to_string(tile_size) + "; no tiles produced");
    return result;
  }
  result.tiles.reserve(origins.size());
  for (const auto& o : origins) {
    auto crop = [&](const torch::Tensor& t) {
      return t.narrow(1, o.y, tile_size).narrow(2, o.x, tile_size).clone();
    };
    result.tiles.emplace_back(pair.id() + "_r" + std::to_string(o.row) + "_c" + std::to_string(o.col),
                              crop(pair.t1()), crop(pair.t2()), crop(pair.mask()));
  }
  return result;
}

}  // namespace smdnet::data
