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
#include "smdnet/diffusion/process.hpp"

#include "smdnet/errors.hpp"

#include <cmath>
#include <string>

namespace smdnet::diffusion {

namespace {

void check_step(std::int64_t t, std::int64_t lo, const NoiseSchedule& sched, const char* what) {
  if (t < lo || t > sched.steps()) {
    throw DomainError(std::string(what) + ": step " + std::to_string(t) + " outside [" + std::to_string(lo) +
                      ", " + std::to_string(sched.steps()) + "]");
  }
}

void check_same_shape(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  if (!a.sizes().equals(b.sizes())) throw ShapeError(std::string(what) + ": shape mismatch");
}

// alpha_bar per batch item, shaped to broadcast against `like`.
struct Coefficients {
  torch::Tensor signal;  // sqrt(alpha_bar), shaped to broadcast over `like`
  torch::Tensor noise;   // sqrt(1 - alpha_bar)
};

// Coefficients are formed in float64 and cast once: 1 - alpha_bar cancels
// badly in float32 at small t (alpha_bar_1 = 0.9999).
Coefficients per_item_coefficients(const torch::Tensor& t, const torch::Tensor& like, const NoiseSchedule& sched,
                                   std::int64_t lo, const char* what) {
  if (t.dim() != 1 || t.size(0) != like.size(0)) {
    throw ShapeError(std::string(what) + ": t must be [B] matching the batch");
  }
  if (t.numel() > 0 && t.min().item<std::int64_t>() < lo) {
    throw DomainError(std::string(what) + ": step below " + std::to_string(lo));
  }
  std::vector<std::int64_t> shape(static_cast<std::size_t>(like.dim()), 1);
  shape[0] = like.size(0);
  const auto ab = sched.alpha_bar_at(t).to(torch::kFloat64).view(shape);
  return {ab.sqrt().to(like.dtype()), (1.0 - ab).sqrt().to(like.dtype())};
}

}  // namespace

double q_sample(double x0, double alpha_bar, double eps) {
  return std::sqrt(alpha_bar) * x0 + std::sqrt(1.0 - alpha_bar) * eps;
}

double eps_from_x0(double x_t, double alpha_bar, double x0hat) {
  if (!(alpha_bar < 1.0)) throw DomainError("eps_from_x0: alpha_bar must be < 1");
  return (x_t - std::sqrt(alpha_bar) * x0hat) / std::sqrt(1.0 - alpha_bar);
}

torch::Tensor q_sample(const torch::Tensor& x0, std::int64_t t, const torch::Tensor& eps, const NoiseSchedule& sched) {
  check_step(t, 0, sched, "q_sample");
  check_same_shape(x0, eps, "q_sample");
  const double ab = sched.alpha_bar(t);
  return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * eps;
}

torch::Tensor q_sample(const torch::Tensor& x0, const torch::Tensor& t, const torch::Tensor& eps,
                       const NoiseSchedule& sched) {
  check_same_shape(x0, eps, "q_sample");
  const auto c = per_item_coefficients(t, x0, sched, 0, "q_sample");
  return c.signal * x0 + c.noise * eps;
}

torch::Tensor eps_from_x0(const torch::Tensor& x_t, std::int64_t t, const torch::Tensor& x0hat,
                          const NoiseSchedule& sched) {
  check_step(t, 1, sched, "eps_from_x0");
  check_same_shape(x_t, x0hat, "eps_from_x0");
  const double ab = sched.alpha_bar(t);
  return (x_t - std::sqrt(ab) * x0hat) / std::sqrt(1.0 - ab);
}

torch::Tensor eps_from_x0(const torch::Tensor& x_t, const torch::Tensor& t, const torch::Tensor& x0hat,
                          const NoiseSchedule& sched) {
  check_same_shape(x_t, x0hat, "eps_from_x0");
  const auto c = per_item_coefficients(t, x_t, sched, 1, "eps_from_x0");
  return (x_t - c.signal * x0hat) / c.noise;
}

double sigma_t(std::int64_t t, std::int64_t t_prev, double eta, const NoiseSchedule& sched) {
  if (t <= t_prev) throw DomainError("sigma_t: requires t > t_prev");
  check_step(t, 1, sched, "sigma_t");
  check_step(t_prev, 0, sched, "sigma_t");
  const double ab_t = sched.alpha_bar(t);
  const double ab_prev = sched.alpha_bar(t_prev);
  return eta * std::sqrt((1.0 - ab_prev) / (1.0 - ab_t) * (1.0 - ab_t / ab_prev));
}

torch::Tensor ddim_step(const torch::Tensor& x_t, std::int64_t t, std::int64_t t_prev, const torch::Tensor& x0hat,
                        double eta, const torch::Tensor& noise, const NoiseSchedule& sched) {
  check_step(t, 1, sched, "ddim_step");
  if (t_prev < 0 || t_prev > t) throw DomainError("ddim_step: requires t >= t_prev >= 0");

  const double sigma = t_prev == t ? 0.0 : sigma_t(t, t_prev, eta, sched);
  const double ab_prev = sched.alpha_bar(t_prev);
  double dir_var = 1.0 - ab_prev - sigma * sigma;
  if (dir_var < -1e-12) {
    throw DomainError("ddim_step: sigma_t^2 exceeds 1 - alpha_bar_prev at t=" + std::to_string(t));
  }
  dir_var = std::max(dir_var, 0.0);

  auto out = std::sqrt(ab_prev) * x0hat;
  if (dir_var > 0.0) out = out + std::sqrt(dir_var) * eps_from_x0(x_t, t, x0hat, sched);
  if (sigma > 0.0) {
    if (!noise.defined()) throw DomainError("ddim_step: stochastic step (sigma > 0) needs noise");
    check_same_shape(x_t, noise, "ddim_step");
    out = out + sigma * noise;
  }
  return out;
}

void TimestepPlan::validate(std::int64_t total_steps) const {
  if (sub_steps.empty()) throw ConfigError("timestep plan: no sub-steps");
  if (eta < 0.0 || eta > 1.0) throw ConfigError("timestep plan: eta must lie in [0, 1]");
  for (std::size_t i = 0; i < sub_steps.size(); ++i) {
    if (sub_steps[i] < 1 || sub_steps[i] > total_steps) {
      throw ConfigError("timestep plan: sub-step " + std::to_string(sub_steps[i]) + " outside [1, T]");
    }
    if (i > 0 && sub_steps[i] >= sub_steps[i - 1]) {
      throw ConfigError("timestep plan: sub-steps must be strictly decreasing");
    }
  }
}

TimestepPlan make_plan(std::int64_t total_steps, std::int64_t n_sub_steps, double eta) {
  if (n_sub_steps < 1 || n_sub_steps > total_steps) {
    throw ConfigError("timestep plan: need 1 <= sub-steps <= T");
  }
  TimestepPlan plan;
  plan.eta = eta;
  plan.sub_steps.reserve(static_cast<std::size_t>(n_sub_steps));
  for (std::int64_t i = n_sub_steps; i >= 1; --i) {
    plan.sub_steps.push_back(
        std::llround(static_cast<double>(i) * static_cast<double>(total_steps) / static_cast<double>(n_sub_steps)));
  }
  plan.validate(total_steps);
  return plan;
}

torch::Tensor ddim_sample(const DenoiseFn& denoise, torch::Tensor x_T, const TimestepPlan& plan,
                          const NoiseSchedule& sched, std::optional<at::Generator> gen, SamplerOptions options) {
  plan.validate(sched.steps());
  torch::Tensor x = std::move(x_T);
  for (std::size_t i = 0; i < plan.sub_steps.size(); ++i) {
    const std::int64_t t = plan.sub_steps[i];
    const std::int64_t t_prev = i + 1 < plan.sub_steps.size() ? plan.sub_steps[i + 1] : 0;
    auto x0hat = denoise(x, t);
    if (options.clip_x0) x0hat = x0hat.clamp(-1.0, 1.0);
    torch::Tensor noise;
    if (sigma_t(t, t_prev, plan.eta, sched) > 0.0) {
      noise = gen ? torch::randn(x.sizes(), *gen, x.options()) : torch::randn_like(x);
    }
    x = ddim_step(x, t, t_prev, x0hat, plan.eta, noise, sched);
  }
  return x;
}

torch::Tensor epsilon_mse(const torch::Tensor& eps, const torch::Tensor& eps_hat) {
  check_same_shape(eps, eps_hat, "epsilon_mse");
  return (eps - eps_hat).square().mean();
}

torch::Tensor mask_to_signal(const torch::Tensor& mask) { return mask * 2.0 - 1.0; }

torch::Tensor signal_to_mask(const torch::Tensor& signal) { return signal.gt(0.0).to(torch::kFloat32); }

}  // namespace smdnet::diffusion
