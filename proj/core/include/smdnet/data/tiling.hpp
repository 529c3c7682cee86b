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
#include <string>
#include <vector>

namespace smdnet::data {

struct TileOrigin {
  std::int64_t row = 0;  ///< grid row index
  std::int64_t col = 0;  ///< grid column index
  std::int64_t y = 0;    ///< top pixel
  std::int64_t x = 0;    ///< left pixel
};

/// Row-major tile origins for a height x width raster. Partial border tiles
/// are dropped, so the count is
/// floor((H - tile)/stride + 1) * floor((W - tile)/stride + 1), or zero when
/// the raster is smaller than one tile.
std::vector<TileOrigin> tile_grid(std::int64_t height, std::int64_t width, std::int64_t tile_size,
                                  std::int64_t stride);

struct TilingResult {
  std::vector<BiTemporalPair> tiles;
  std::vector<std::string> warnings;
};

/// Cuts a pair into tile_size x tile_size crops. Tile ids are
/// "<parent>_r<row>_c<col>". An undersized input yields no tiles and one
/// warning.
TilingResult tile_pair(const BiTemporalPair& pair, std::int64_t tile_size, std::int64_t stride);

}  // namespace smdnet::data
