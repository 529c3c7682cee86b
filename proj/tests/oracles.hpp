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

// Reference implementations written independently of the library, used as
// test oracles. Everything here is plain double arithmetic.

#include <torch/torch.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace smdnet::oracle {

/// alpha_bar[0..T] for linear betas, by direct product loop.
inline std::vector<double> linear_alpha_bar(std::int64_t T, double b0 = 1e-4, double b1 = 2e-2) {
  std::vector<double> ab(static_cast<std::size_t>(T + 1), 1.0);
  for (std::int64_t t = 1; t <= T; ++t) {
    const double beta = T == 1 ? b0 : b0 + (b1 - b0) * static_cast<double>(t - 1) / static_cast<double>(T - 1);
    ab[static_cast<std::size_t>(t)] = ab[static_cast<std::size_t>(t - 1)] * (1.0 - beta);
  }
  return ab;
}

/// DDPM posterior variance (1 - alpha_t)(1 - ab_{t-1}) / (1 - ab_t).
inline double ddpm_posterior_variance(const std::vector<double>& ab, std::int64_t t) {
  const double ab_t = ab[static_cast<std::size_t>(t)];
  const double ab_prev = ab[static_cast<std::size_t>(t - 1)];
  const double alpha_t = ab_t / ab_prev;
  return (1.0 - alpha_t) * (1.0 - ab_prev) / (1.0 - ab_t);
}

/// 1D equal-weight two-component Gaussian mixture with exact posterior mean
/// E[x0 | x_t] under x_t = sqrt(ab) x0 + sqrt(1 - ab) eps.
struct TwoModeTarget {
  double mu = 0.6;
  double s = 0.15;

  torch::Tensor sample(std::int64_t n, at::Generator& gen) const {
    auto pick = torch::rand({n}, gen, torch::kFloat64).lt(0.5).to(torch::kFloat64) * 2.0 - 1.0;
    return pick * mu + s * torch::randn({n}, gen, torch::kFloat64);
  }

  torch::Tensor posterior_mean(const torch::Tensor& x_t, double ab) const {
    const double sa = std::sqrt(ab);
    const double var = ab * s * s + (1.0 - ab);
    const double gain = sa * s * s / var;
    std::vector<torch::Tensor> log_w, means;
    for (double m : {-mu, mu}) {
      log_w.push_back(-(x_t - sa * m).square() / (2.0 * var));
      means.push_back(m + gain * (x_t - sa * m));
    }
    auto w = torch::softmax(torch::stack(log_w), 0);
    return (w * torch::stack(means)).sum(0);
  }
};

/// Ancestral DDPM sampler over every step T..1 with the posterior-mean denoiser.
template <typename Denoise>
torch::Tensor ddpm_ancestral(const Denoise& x0_of, torch::Tensor x, const std::vector<double>& ab, at::Generator& gen) {
  const auto T = static_cast<std::int64_t>(ab.size()) - 1;
  for (std::int64_t t = T; t >= 1; --t) {
    const double ab_t = ab[static_cast<std::size_t>(t)];
    const double ab_prev = ab[static_cast<std::size_t>(t - 1)];
    const double alpha_t = ab_t / ab_prev;
    const double beta_t = 1.0 - alpha_t;
    auto x0 = x0_of(x, t);
    auto mean = (std::sqrt(ab_prev) * beta_t / (1.0 - ab_t)) * x0 +
                (std::sqrt(alpha_t) * (1.0 - ab_prev) / (1.0 - ab_t)) * x;
    const double var = beta_t * (1.0 - ab_prev) / (1.0 - ab_t);
    x = var > 0.0 ? mean + std::sqrt(var) * torch::randn(x.sizes(), gen, x.options()) : mean;
  }
  return x;
}

/// Two-sample chi-square statistic over shared equal-width bins (equal
/// sample sizes). Returns {statistic, degrees of freedom}.
inline std::pair<double, int> two_sample_chi_square(const torch::Tensor& a, const torch::Tensor& b, double lo,
                                                    double hi, int bins) {
  auto ha = torch::histc(a.clamp(lo, hi), bins, lo, hi);
  auto hb = torch::histc(b.clamp(lo, hi), bins, lo, hi);
  double stat = 0.0;
  int used = 0;
  for (int i = 0; i < bins; ++i) {
    const double r = ha[i].item<double>();
    const double s = hb[i].item<double>();
    if (r + s == 0.0) continue;
    stat += (r - s) * (r - s) / (r + s);
    ++used;
  }
  return {stat, used - 1};
}

/// Hand metric formulas from raw counts.
struct HandMetrics {
  double p, r, f1, iou, oa;
};
inline HandMetrics hand_metrics(double tp, double fp, double fn, double tn) {
  const double p = tp / (tp + fp);
  const double r = tp / (tp + fn);
  return {p, r, 2.0 * p * r / (p + r), tp / (tp + fp + fn), (tp + tn) / (tp + fp + fn + tn)};
}

}  // namespace smdnet::oracle
