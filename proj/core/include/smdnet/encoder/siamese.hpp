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

#include "smdnet/encoder/attention.hpp"
#include "smdnet/encoder/rsu.hpp"

#include <torch/torch.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smdnet::encoder {

struct RsuSpec {
  int depth = 7;
  bool dilated = false;

  /// "7", "4F", ...
  static RsuSpec parse(std::string_view text);
  std::string str() const;
  bool operator==(const RsuSpec&) const = default;
};

struct EncoderConfig {
  int n_layers = 4;
  std::vector<std::int64_t> channels;
  std::vector<RsuSpec> rsu_depths;
  AttentionKind attention_kind = AttentionKind::kSA;
  std::int64_t in_channels = 3;

  /// Layer-depth presets: 4 -> (64, 64, 64, 128), 5 -> (..., 128),
  /// 6 -> (..., 128, 256); RSU depths 7, 6, 5, 4, 4F, 4F truncated.
  static EncoderConfig preset(int n_layers, AttentionKind attention = AttentionKind::kSA);
  static std::vector<std::int64_t> preset_channels(int n_layers);
  static std::vector<RsuSpec> preset_depths(int n_layers);

  /// Internal width of the RSU at `level`: a quarter of its output, at least 8.
  std::int64_t mid_channels(int level) const;
  void validate() const;
};

/// Per-level feature maps; level i is [B, C_i, H / 2^i, W / 2^i].
struct FeaturePyramid {
  std::vector<torch::Tensor> levels;

  std::size_t size() const noexcept { return levels.size(); }
  const torch::Tensor& operator[](std::size_t i) const { return levels[i]; }
};

/// Per-level |fa_i - fb_i|. Throws ShapeError naming the first mismatched level.
FeaturePyramid feature_difference(const FeaturePyramid& fa, const FeaturePyramid& fb);

/// One stream of the Siamese encoder. Level i runs an RSU on the (pooled)
/// previous level; the attention-enhanced output is what gets reported.
class FeatureStreamImpl : public torch::nn::Module {
 public:
  explicit FeatureStreamImpl(EncoderConfig cfg);

  FeaturePyramid forward(const torch::Tensor& image);
  const EncoderConfig& config() const noexcept { return cfg_; }

 private:
  EncoderConfig cfg_;
  torch::nn::ModuleList blocks_{nullptr};
  torch::nn::ModuleList gates_{nullptr};
};
TORCH_MODULE(FeatureStream);

/// Shared-weight encoder over both acquisitions. There is exactly one
/// parameter set; both images run through the same FeatureStream.
class SiameseEncoderImpl : public torch::nn::Module {
 public:
  explicit SiameseEncoderImpl(EncoderConfig cfg);

  std::pair<FeaturePyramid, FeaturePyramid> encode(const torch::Tensor& t1, const torch::Tensor& t2);
  /// Difference pyramid f_hat = |enc(t1) - enc(t2)| per level.
  FeaturePyramid forward(const torch::Tensor& t1, const torch::Tensor& t2);

  const EncoderConfig& config() const noexcept { return stream_->config(); }

 private:
  FeatureStream stream_{nullptr};
};
TORCH_MODULE(SiameseEncoder);

std::int64_t parameter_count(const torch::nn::Module& module);

}  // namespace smdnet::encoder
