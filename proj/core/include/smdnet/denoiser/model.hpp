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

#include "smdnet/denoiser/unet.hpp"
#include "smdnet/diffusion/process.hpp"
#include "smdnet/encoder/siamese.hpp"

#include <torch/torch.h>

#include <cstdint>
#include <optional>

namespace smdnet::denoiser {

struct ModelConfig {
  encoder::EncoderConfig encoder;
  DenoiserConfig denoiser;

  static ModelConfig make(const encoder::EncoderConfig& enc, std::int64_t time_embed_dim = 128);
  void validate() const;
  /// Inputs must have sides divisible by this.
  std::int64_t size_multiple() const;
  /// Smallest side every RSU level can take (a multiple of size_multiple()).
  std::int64_t min_input_side() const;
};

/// Siamese feature-differential encoder plus conditional denoiser.
class SMDNetImpl : public torch::nn::Module {
 public:
  explicit SMDNetImpl(ModelConfig cfg);

  /// f_hat for a batch of image pairs [B, 3, H, W].
  FeaturePyramid condition(const torch::Tensor& t1, const torch::Tensor& t2);

  /// x0 prediction from cat(T1, T2, x_t), the steps t (int64 [B]) and f_hat.
  torch::Tensor denoise(const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& x_t,
                        const torch::Tensor& t, const FeaturePyramid& f_diff);
  /// Same network with the conditioning path removed.
  torch::Tensor denoise_unconditional(const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& x_t,
                                      const torch::Tensor& t);

  /// Stops gradients into the Siamese encoder.
  void set_encoder_frozen(bool frozen);
  bool encoder_frozen() const noexcept { return encoder_frozen_; }

  encoder::SiameseEncoder& siamese() { return encoder_; }
  DenoisingUNet& unet() { return unet_; }
  const ModelConfig& config() const noexcept { return cfg_; }

 private:
  torch::Tensor stack_input(const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& x_t) const;

  ModelConfig cfg_;
  bool encoder_frozen_ = false;
  encoder::SiameseEncoder encoder_{nullptr};
  DenoisingUNet unet_{nullptr};
};
TORCH_MODULE(SMDNet);

/// Samples the change mask for image pairs [B, 3, H, W] by DDIM from the
/// given x_T ([B, 1, H, W]). Inputs whose sides are not multiples of
/// ModelConfig::size_multiple() (or below min_input_side()) are padded and
/// the result cropped.
/// Returns {0, 1} float masks [B, 1, H, W].
torch::Tensor predict_mask(SMDNet& model, const torch::Tensor& t1, const torch::Tensor& t2, const torch::Tensor& x_T,
                           const diffusion::TimestepPlan& plan, const diffusion::NoiseSchedule& sched,
                           std::optional<at::Generator> gen = std::nullopt);

/// As above, drawing x_T (and any sampler noise) from `gen`.
torch::Tensor predict_mask(SMDNet& model, const torch::Tensor& t1, const torch::Tensor& t2,
                           const diffusion::TimestepPlan& plan, const diffusion::NoiseSchedule& sched,
                           at::Generator gen);

}  // namespace smdnet::denoiser
