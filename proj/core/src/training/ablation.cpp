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
#include "smdnet/training/ablation.hpp"

#include "smdnet/errors.hpp"
#include "smdnet/training/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace smdnet::training {

AblationAxis parse_ablation_axis(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "layers") return AblationAxis::kLayers;
  if (lower == "attention") return AblationAxis::kAttention;
  if (lower == "steps") return AblationAxis::kSteps;
  throw ConfigError("unknown ablation axis '" + std::string(name) + "' (expected layers, attention or steps)");
}

std::string_view to_string(AblationAxis axis) {
  switch (axis) {
    case AblationAxis::kLayers: return "layers";
    case AblationAxis::kAttention: return "attention";
    case AblationAxis::kSteps: return "steps";
  }
  return "?";
}

std::string format_parameter_count(std::int64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fM", static_cast<double>(n) / 1e6);
  return buf;
}

std::vector<RunConfig> ablation_configs(AblationAxis axis, const RunConfig& base) {
  std::vector<RunConfig> out;
  switch (axis) {
    case AblationAxis::kLayers: {
      // A custom width in base.channels scales the presets uniformly.
      const double scale = base.channels.empty() ? 1.0 : static_cast<double>(base.channels.front()) / 64.0;
      for (int n : {4, 5, 6}) {
        auto cfg = base;
        cfg.n_layers = n;
        cfg.channels.clear();
        if (!base.channels.empty()) {
          for (auto c : encoder::EncoderConfig::preset_channels(n)) {
            cfg.channels.push_back(std::max<std::int64_t>(1, std::llround(static_cast<double>(c) * scale)));
          }
        }
        out.push_back(std::move(cfg));
      }
      break;
    }
    case AblationAxis::kAttention:
      for (auto kind : {encoder::AttentionKind::kSA, encoder::AttentionKind::kECA, encoder::AttentionKind::kNL,
                        encoder::AttentionKind::kAX, encoder::AttentionKind::kNone}) {
        auto cfg = base;
        cfg.attention_kind = kind;
        out.push_back(std::move(cfg));
      }
      break;
    case AblationAxis::kSteps:
      for (std::int64_t t : {500, 750, 1000}) {
        auto cfg = base;
        cfg.T = t;
        cfg.n_sub_steps = std::min(base.n_sub_steps, t);
        out.push_back(std::move(cfg));
      }
      break;
  }
  for (const auto& cfg : out) cfg.validate();
  return out;
}

namespace {

std::string row_label(AblationAxis axis, const RunConfig& cfg) {
  switch (axis) {
    case AblationAxis::kLayers: return std::to_string(cfg.n_layers) + " layers";
    case AblationAxis::kAttention: return std::string(encoder::to_string(cfg.attention_kind));
    case AblationAxis::kSteps: return "T=" + std::to_string(cfg.T);
  }
  return "?";
}

template <typename T>
std::string join(const std::vector<T>& v, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

AblationTable ablate(AblationAxis axis, const RunConfig& base, const std::vector<data::BiTemporalPair>& train,
                     const std::vector<data::BiTemporalPair>& test, const LogFn& log) {
  AblationTable table;
  table.axis = axis;
  const auto& eval_set = test.empty() ? train : test;
  if (test.empty()) table.notes.push_back("no test pairs; metrics are computed on the training pairs");

  for (const auto& cfg : ablation_configs(axis, base)) {
    AblationRow row;
    row.label = row_label(axis, cfg);
    if (log) log("ablation " + std::string(to_string(axis)) + ": " + row.label);
    Trainer trainer(cfg);
    const auto fit = trainer.fit(train, {}, std::nullopt, log);

    const auto tail = std::min<std::size_t>(8, fit.step_losses.size());
    double sum = 0.0;
    for (std::size_t i = fit.step_losses.size() - tail; i < fit.step_losses.size(); ++i) sum += fit.step_losses[i];
    row.final_loss = tail > 0 ? sum / static_cast<double>(tail) : 0.0;

    EvalOptions opts;
    opts.noise_seed = cfg.seed;
    opts.batch_size = cfg.batch_size;
    const auto eval = evaluate(trainer.model(), eval_set, trainer.plan(), trainer.schedule(), opts);

    row.n_layers = cfg.n_layers;
    row.channels = cfg.encoder_config().channels;
    row.attention_kind = cfg.attention_kind;
    row.T = cfg.T;
    row.sub_steps = eval.sub_steps;
    row.parameters = encoder::parameter_count(*trainer.model());
    row.metrics = eval.report;
    table.rows.push_back(std::move(row));
  }

  if (axis == AblationAxis::kSteps && table.rows.size() == 3) {
    const bool monotone = table.rows[0].metrics.f1 <= table.rows[1].metrics.f1 &&
                          table.rows[1].metrics.f1 <= table.rows[2].metrics.f1;
    table.notes.push_back(std::string("trend: F1 non-decreasing in T (500 -> 750 -> 1000): ") +
                          (monotone ? "holds" : "does not hold on this run"));
  }
  if (axis == AblationAxis::kLayers && table.rows.size() == 3) {
    const bool growing = table.rows[0].parameters < table.rows[1].parameters &&
                         table.rows[1].parameters < table.rows[2].parameters;
    table.notes.push_back(std::string("parameter count grows with depth: ") + (growing ? "yes" : "no"));
  }
  return table;
}

std::string AblationTable::to_csv() const {
  std::ostringstream os;
  os << "axis,label,n_layers,channels,attention,T,sub_steps,parameters,parameters_m,final_loss,precision,recall,f1,"
        "iou,oa,tp,fp,fn,tn\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    os << to_string(axis) << ',' << r.label << ',' << r.n_layers << ",\"" << join(r.channels, " ") << "\","
       << encoder::to_string(r.attention_kind) << ',' << r.T << ",\"" << join(r.sub_steps, " ") << "\","
       << r.parameters << ',' << format_parameter_count(r.parameters) << ',' << fmt(r.final_loss) << ','
       << fmt(m.precision) << ',' << fmt(m.recall) << ',' << fmt(m.f1) << ',' << fmt(m.iou) << ',' << fmt(m.oa) << ','
       << m.counts.tp << ',' << m.counts.fp << ',' << m.counts.fn << ',' << m.counts.tn << '\n';
  }
  return os.str();
}

std::string AblationTable::to_markdown() const {
  std::ostringstream os;
  os << "| " << to_string(axis) << " | params | final loss | P | R | F1 | IoU | OA |\n";
  os << "|---|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    os << "| " << r.label << " | " << format_parameter_count(r.parameters) << " | " << fmt(r.final_loss) << " | "
       << fmt(m.precision) << " | " << fmt(m.recall) << " | " << fmt(m.f1) << " | " << fmt(m.iou) << " | "
       << fmt(m.oa) << " |\n";
  }
  for (const auto& n : notes) os << "\n- " << n;
  if (!notes.empty()) os << '\n';
  return os.str();
}

}  // namespace smdnet::training
