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
#include "smdnet/denoiser/model.hpp"

#include "smdnet/errors.hpp"

#include <algorithm>

namespace smdnet::denoiser {

namespace F = torch::nn::functional;

ModelConfig ModelConfig::make(const encoder::EncoderConfig& enc, std::int64_t time_embed_dim) {
  return {enc, DenoiserConfig::matching(enc, time_embed_dim)};
}

void ModelConfig::validate() const {
  encoder.validate();
  denoiser.validate();
  if (encoder.n_layers != denoiser.n_layers || encoder.channels != denoiser.channels) {
    throw ConfigError("model: denoiser levels must mirror the encoder (n_layers and channels)");
  }
}

std::int64_t ModelConfig::size_multiple() const { return std::int64_t{1} << (encoder.n_layers - 1); }

std::int64_t ModelConfig::min_input_side() const {
  std::int64_t side = size_multiple();
  for (int i = 0; i < encoder.n_layers; ++i) {
    const auto& spec = encoder.rsu_depths[static_cast<std::size_t>(i)];
    encoder::RSUConfig rsu;
    rsu.depth = spec.depth;
    rsu.dilated = spec.dilated;
    side = std::max(side, rsu.min_spatial() << i);
  }
  return side;
}

SMDNetImpl::SMDNetImpl(ModelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  encoder_ = register_module("encoder", encoder::SiameseEncoder(cfg_.encoder));
  unet_ = register_module("unet", DenoisingUNet(cfg_.denoiser));
}

FeaturePyramid SMDNetImpl::condition(const torch::Tensor& t1, const torch::Tensor& t2) {
  if (encoder_frozen_) {
    torch::NoGradGuard no_grad;
    return encoder_(t1, t2);
  }
  return encoder_(t1, t2);
}

torch::Tensor SMDNetImpl::stack_input(const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& x_t) const {
  if (t1.dim() != 4 || t1.size(1) != 3 || !t1.sizes().equals(t2.sizes())) {
    throw ShapeError("SMDNet: t1 and t2 must both be [B, 3, H, W]");
  }
  if (x_t.dim() != 4 || x_t.size(1) != 1 || x_t.size(0) != t1.size(0) || x_t.size(2) != t1.size(2) ||
      x_t.size(3) != t1.size(3)) {
    throw ShapeError("SMDNet: x_t must be [B, 1, H, W] matching the images");
  }
  return torch::cat({t1, t2, x_t}, 1);
}

torch::Tensor SMDNetImpl::denoise(const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& x_t,
                                  const torch::Tensor& t, const FeaturePyramid& f_diff) {
  return unet_->forward(stack_input(t1, t2, x_t), t, &f_diff);
}

torch::Tensor SMDNetImpl::denoise_unconditional(const torch::Tensor& t1, const torch::Tensor& t2,
                                                const torch::Tensor& x_t, const torch::Tensor& t) {
  return unet_->forward(stack_input(t1, t2, x_t), t, nullptr);
}

void SMDNetImpl::set_encoder_frozen(bool frozen) {
  encoder_frozen_ = frozen;
  for (auto& p : encoder_->parameters()) p.set_requires_grad(!frozen);
}

namespace {

std::int64_t round_up(std::int64_t v, std::int64_t m) { return (v + m - 1) / m * m; }

// Reflect where possible; reflection cannot extend a side by its own length
// or more, so tiny inputs fall back to edge replication.
torch::Tensor pad_to(const torch::Tensor& x, std::int64_t pad_h, std::int64_t pad_w) {
  if (pad_h == 0 && pad_w == 0) return x;
  F::PadFuncOptions opts({0, pad_w, 0, pad_h});
  if (pad_h < x.size(2) && pad_w < x.size(3)) {
    opts.mode(torch::kReflect);
  } else {
    opts.mode(torch::kReplicate);
  }
  return F::pad(x, opts);
}

}  // namespace

torch::Tensor predict_mask(SMDNet& model, const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& x_T,
                           const diffusion::TimestepPlan& plan, const diffusion::NoiseSchedule& sched,
                           std::optional<at::Generator> gen) {
  torch::NoGradGuard no_grad;
  const bool was_training = model->is_training();
  model->eval();

  const auto h = t1.size(2);
  const auto w = t1.size(3);
  const auto m = model->config().size_multiple();
  const auto floor = model->config().min_input_side();
  const auto pad_h = std::max(round_up(h, m), floor) - h;
  const auto pad_w = std::max(round_up(w, m), floor) - w;
  const auto a = pad_to(t1, pad_h, pad_w);
  const auto b = pad_to(t2, pad_h, pad_w);
  const auto x = pad_to(x_T, pad_h, pad_w);

  const auto f_diff = model->condition(a, b);
  const diffusion::DenoiseFn denoise = [&](const torch::Tensor& x_t, std::int64_t t) {
    auto steps = torch::full({x_t.size(0)}, t, torch::TensorOptions().dtype(torch::kInt64));
    return model->denoise(a, b, x_t, steps, f_diff);
  };
  auto signal = diffusion::ddim_sample(denoise, x, plan, sched, std::move(gen));
  if (was_training) model->train();
  return diffusion::signal_to_mask(signal.narrow(2, 0, h).narrow(3, 0, w));
}

torch::Tensor predict_mask(SMDNet& model, const torch::Tensor& t1, const torch::Tensor& t2,
                           const diffusion::TimestepPlan& plan, const diffusion::NoiseSchedule& sched,
                           at::Generator gen) {
  auto x_T = torch::randn({t1.size(0), 1, t1.size(2), t1.size(3)}, gen, t1.options());
  return predict_mask(model, t1, t2, x_T, plan, sched, gen);
}

}  // namespace smdnet::denoiser
