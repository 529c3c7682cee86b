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

#include <torch/torch.h>

#include <cstdint>
#include <string>
#include <vector>

namespace smdnet::objectives {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const noexcept { return tp + fp + fn + tn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) noexcept { return a += b; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Four-cell contingency of binary prediction vs. ground truth (same shape,
/// values in {0, 1}). Throws DataError on non-binary input.
ConfusionCounts confusion(const torch::Tensor& pred_mask, const torch::Tensor& gt);

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
  double oa = 0.0;
  ConfusionCounts counts;
  /// Names of metrics whose denominator was zero (reported as 0).
  std::vector<std::string> degenerate;

  bool is_degenerate() const noexcept { return !degenerate.empty(); }
  bool operator==(const MetricsReport&) const = default;
};

MetricsReport compute_metrics(const ConfusionCounts& counts);

std::string to_json(const MetricsReport& report, int indent = 2);
MetricsReport metrics_from_json(const std::string& text);

}  // namespace smdnet::objectives
