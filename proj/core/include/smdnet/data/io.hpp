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

#include <torch/torch.h>

#include <filesystem>
#include <string>
#include <vector>

namespace smdnet::data {

/// On-disk layouts understood by load_dataset.
enum class DatasetLayout {
  /// <root>/A/<id>.png (pre), <root>/B/<id>.png (post), <root>/label/<id>.png (0/255 mask)
  kABLabel,
};

struct LoadedDataset {
  std::vector<BiTemporalPair> pairs;
  std::vector<std::string> warnings;
};

/// Decodes every pair under root. Images are scaled to [0, 1] by their bit
/// depth; masks are binarized at 0.5 after scaling. A file without its
/// counterparts raises DataError naming the orphan id.
LoadedDataset load_dataset(const std::filesystem::path& root, DatasetLayout layout = DatasetLayout::kABLabel);

/// Writes pairs back in the kABLabel layout (masks as 0/255).
void save_dataset(const std::filesystem::path& root, const std::vector<BiTemporalPair>& pairs);

/// Reads an 8- or 16-bit PNG/JPEG/TIFF as float32 [3, H, W] RGB in [0, 1].
torch::Tensor read_rgb(const std::filesystem::path& path);

/// Reads a single-channel image as float32 [1, H, W] in [0, 1].
torch::Tensor read_gray(const std::filesystem::path& path);

/// Writes float [C, H, W] in [0, 1] (C = 1 or 3) as an 8-bit image.
void write_image(const std::filesystem::path& path, const torch::Tensor& chw);

}  // namespace smdnet::data
