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

#include "smdnet/diffusion/schedule.hpp"

#include <torch/torch.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace smdnet::diffusion {

// Scalar forms, parameterized directly by alpha_bar.

/// sqrt(ab) * x0 + sqrt(1 - ab) * eps
double q_sample(double x0, double alpha_bar, double eps);
/// (x_t - sqrt(ab) * x0hat) / sqrt(1 - ab); requires ab < 1.
double eps_from_x0(double x_t, double alpha_bar, double x0hat);

/// Forward noising at a single step t in [0, T].
torch::Tensor q_sample(const torch::Tensor& x0, std::int64_t t, const torch::Tensor& eps, const NoiseSchedule& sched);
/// Per-item steps: t is int64 [B], x0/eps are [B, ...].
torch::Tensor q_sample(const torch::Tensor& x0, const torch::Tensor& t, const torch::Tensor& eps,
                       const NoiseSchedule& sched);

/// Noise implied by a clean-signal prediction; t in [1, T].
torch::Tensor eps_from_x0(const torch::Tensor& x_t, std::int64_t t, const torch::Tensor& x0hat,
                          const NoiseSchedule& sched);
torch::Tensor eps_from_x0(const torch::Tensor& x_t, const torch::Tensor& t, const torch::Tensor& x0hat,
                          const NoiseSchedule& sched);

/// eta * sqrt((1 - ab_prev) / (1 - ab_t) * (1 - ab_t / ab_prev)); requires t > t_prev >= 0.
/// eta = 1 with t_prev = t - 1 is the DDPM posterior standard deviation.
double sigma_t(std::int64_t t, std::int64_t t_prev, double eta, const NoiseSchedule& sched);

/// One generalized DDIM update x_t -> x_{t_prev} from a clean-signal
/// prediction. `noise` may be undefined when the step is deterministic.
torch::Tensor ddim_step(const torch::Tensor& x_t, std::int64_t t, std::int64_t t_prev, const torch::Tensor& x0hat,
                        double eta, const torch::Tensor& noise, const NoiseSchedule& sched);

/// Descending inference sub-sequence of {1..T} plus the sigma scale.
struct TimestepPlan {
  std::vector<std::int64_t> sub_steps;
  double eta = 0.0;

  void validate(std::int64_t total_steps) const;
};

/// Uniform stride: t_i = round(i * T / S) for i = S .. 1.
TimestepPlan make_plan(std::int64_t total_steps, std::int64_t n_sub_steps, double eta = 0.0);

/// Maps (x_t, t) to a clean-signal prediction; the condition is captured.
using DenoiseFn = std::function<torch::Tensor(const torch::Tensor& x_t, std::int64_t t)>;

struct SamplerOptions {
  /// Clamp x0 predictions to [-1, 1] before each update.
  bool clip_x0 = true;
};

/// Runs the DDIM chain from the given x_T through plan.sub_steps and a final
/// jump to t = 0. Fresh noise is drawn from `gen` only when sigma_t > 0.
torch::Tensor ddim_sample(const DenoiseFn& denoise, torch::Tensor x_T, const TimestepPlan& plan,
                          const NoiseSchedule& sched, std::optional<at::Generator> gen = std::nullopt,
                          SamplerOptions options = {});

/// Mean squared difference between true and reconstructed noise.
torch::Tensor epsilon_mse(const torch::Tensor& eps, const torch::Tensor& eps_hat);

/// {0, 1} mask -> {-1, +1} diffusion signal.
torch::Tensor mask_to_signal(const torch::Tensor& mask);
/// Diffusion signal -> {0, 1} mask, thresholded at 0.
torch::Tensor signal_to_mask(const torch::Tensor& signal);

}  // namespace smdnet::diffusion
