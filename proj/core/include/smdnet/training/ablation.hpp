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
#include "smdnet/objectives/metrics.hpp"
#include "smdnet/training/config.hpp"
#include "smdnet/training/trainer.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smdnet::training {

enum class AblationAxis { kLayers, kAttention, kSteps };

AblationAxis parse_ablation_axis(std::string_view name);
std::string_view to_string(AblationAxis axis);

struct AblationRow {
  std::string label;
  int n_layers = 0;
  std::vector<std::int64_t> channels;
  encoder::AttentionKind attention_kind = encoder::AttentionKind::kSA;
  std::int64_t T = 0;
  std::vector<std::int64_t> sub_steps;
  std::int64_t parameters = 0;
  double final_loss = 0.0;
  objectives::MetricsReport metrics;
};

struct AblationTable {
  AblationAxis axis = AblationAxis::kLayers;
  std::vector<AblationRow> rows;
  /// Informational remarks (trend checks); never failures.
  std::vector<std::string> notes;

  std::string to_csv() const;
  std::string to_markdown() const;
};

/// Variants swept along one axis: n_layers 4/5/6, attention SA/ECA/NL/AX/none,
/// or T 500/750/1000. Every cell uses base's seed and training budget.
std::vector<RunConfig> ablation_configs(AblationAxis axis, const RunConfig& base);

/// Trains each variant on `train` and evaluates it on `test`.
AblationTable ablate(AblationAxis axis, const RunConfig& base, const std::vector<data::BiTemporalPair>& train,
                     const std::vector<data::BiTemporalPair>& test, const LogFn& log = {});

/// "12.47M"-style parameter count.
std::string format_parameter_count(std::int64_t n);

}  // namespace smdnet::training
