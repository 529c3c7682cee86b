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
#include "smdnet/encoder/siamese.hpp"

#include "smdnet/errors.hpp"

#include <algorithm>

namespace smdnet::encoder {

RsuSpec RsuSpec::parse(std::string_view text) {
  RsuSpec spec;
  std::string s(text);
  if (!s.empty() && (s.back() == 'F' || s.back() == 'f')) {
    spec.dilated = true;
    s.pop_back();
  }
  try {
    std::size_t used = 0;
    spec.depth = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw ConfigError("invalid RSU depth '" + std::string(text) + "' (expected e.g. 7 or 4F)");
  }
  return spec;
}

std::string RsuSpec::str() const { return std::to_string(depth) + (dilated ? "F" : ""); }

std::vector<std::int64_t> EncoderConfig::preset_channels(int n_layers) {
  static const std::vector<std::int64_t> kFull{64, 64, 64, 128, 128, 256};
  if (n_layers < 4 || n_layers > 6) throw ConfigError("n_layers must be 4, 5 or 6");
  return {kFull.begin(), kFull.begin() + n_layers};
}

std::vector<RsuSpec> EncoderConfig::preset_depths(int n_layers) {
  static const std::vector<RsuSpec> kFull{{7, false}, {6, false}, {5, false}, {4, false}, {4, true}, {4, true}};
  if (n_layers < 1 || n_layers > 6) throw ConfigError("no RSU depth preset for " + std::to_string(n_layers) + " layers");
  return {kFull.begin(), kFull.begin() + n_layers};
}

EncoderConfig EncoderConfig::preset(int n_layers, AttentionKind attention) {
  EncoderConfig cfg;
  cfg.n_layers = n_layers;
  cfg.channels = preset_channels(n_layers);
  cfg.rsu_depths = preset_depths(n_layers);
  cfg.attention_kind = attention;
  return cfg;
}

std::int64_t EncoderConfig::mid_channels(int level) const {
  return std::max<std::int64_t>(channels.at(static_cast<std::size_t>(level)) / 4, 8);
}

void EncoderConfig::validate() const {
  if (n_layers < 1) throw ConfigError("encoder: n_layers must be >= 1");
  if (channels.size() != static_cast<std::size_t>(n_layers)) {
    throw ConfigError("encoder: channels list has " + std::to_string(channels.size()) + " entries for " +
                      std::to_string(n_layers) + " layers");
  }
  if (rsu_depths.size() != static_cast<std::size_t>(n_layers)) {
    throw ConfigError("encoder: rsu_depths list length must equal n_layers");
  }
  for (auto c : channels) {
    if (c < 1) throw ConfigError("encoder: channel counts must be >= 1");
  }
  for (const auto& d : rsu_depths) {
    if (d.depth < 2) throw ConfigError("encoder: RSU depth must be >= 2");
  }
  if (in_channels < 1) throw ConfigError("encoder: in_channels must be >= 1");
}

FeaturePyramid feature_difference(const FeaturePyramid& fa, const FeaturePyramid& fb) {
  if (fa.size() != fb.size()) {
    throw ShapeError("feature_difference: pyramids have " + std::to_string(fa.size()) + " and " +
                     std::to_string(fb.size()) + " levels");
  }
  FeaturePyramid out;
  out.levels.reserve(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (!fa[i].sizes().equals(fb[i].sizes())) {
      throw ShapeError("feature_difference: shape mismatch at level " + std::to_string(i));
    }
    out.levels.push_back((fa[i] - fb[i]).abs());
  }
  return out;
}

FeatureStreamImpl::FeatureStreamImpl(EncoderConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  blocks_ = register_module("blocks", torch::nn::ModuleList());
  gates_ = register_module("gates", torch::nn::ModuleList());
  for (int i = 0; i < cfg_.n_layers; ++i) {
    const auto level = static_cast<std::size_t>(i);
    RSUConfig rsu;
    rsu.depth = cfg_.rsu_depths[level].depth;
    rsu.dilated = cfg_.rsu_depths[level].dilated;
    rsu.in_channels = i == 0 ? cfg_.in_channels : cfg_.channels[level - 1];
    rsu.mid_channels = cfg_.mid_channels(i);
    rsu.out_channels = cfg_.channels[level];
    blocks_->push_back(RSU(rsu));
    gates_->push_back(AttentionGate(cfg_.attention_kind, cfg_.channels[level]));
  }
}

FeaturePyramid FeatureStreamImpl::forward(const torch::Tensor& image) {
  FeaturePyramid pyramid;
  pyramid.levels.reserve(static_cast<std::size_t>(cfg_.n_layers));
  torch::Tensor h = image;
  for (int i = 0; i < cfg_.n_layers; ++i) {
    const auto level = static_cast<std::size_t>(i);
    if (i > 0) h = downsample2x(h);
    auto block = blocks_[level]->as<RSU>();
    if (std::min(h.size(2), h.size(3)) < block->config().min_spatial()) {
      throw ConfigError("encoder level " + std::to_string(i) + ": " + block->config().name() +
                        " needs spatial size >= " + std::to_string(block->config().min_spatial()) + ", got " +
                        std::to_string(h.size(2)) + "x" + std::to_string(h.size(3)));
    }
    h = block->forward(h);
    pyramid.levels.push_back(gates_[level]->as<AttentionGate>()->forward(h));
  }
  return pyramid;
}

SiameseEncoderImpl::SiameseEncoderImpl(EncoderConfig cfg) {
  stream_ = register_module("stream", FeatureStream(std::move(cfg)));
}

std::pair<FeaturePyramid, FeaturePyramid> SiameseEncoderImpl::encode(const torch::Tensor& t1, const torch::Tensor& t2) {
  if (!t1.sizes().equals(t2.sizes())) throw ShapeError("siamese encoder: t1 and t2 shapes differ");
  return {stream_(t1), stream_(t2)};
}

FeaturePyramid SiameseEncoderImpl::forward(const torch::Tensor& t1, const torch::Tensor& t2) {
  auto [fa, fb] = encode(t1, t2);
  return feature_difference(fa, fb);
}

std::int64_t parameter_count(const torch::nn::Module& module) {
  std::int64_t n = 0;
  for (const auto& p : module.parameters()) n += p.numel();
  return n;
}

}  // namespace smdnet::encoder
