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
#include "smdnet/objectives/metrics.hpp"

#include "smdnet/errors.hpp"

#include <nlohmann/json.hpp>

namespace smdnet::objectives {

ConfusionCounts confusion(const torch::Tensor& pred_mask, const torch::Tensor& gt) {
  if (!pred_mask.sizes().equals(gt.sizes())) throw ShapeError("confusion: prediction and target shapes differ");
  const auto is_binary = [](const torch::Tensor& t) { return t.eq(0).logical_or(t.eq(1)).all().item<bool>(); };
  if (!is_binary(pred_mask)) throw DataError("confusion: prediction is not binary");
  if (!is_binary(gt)) throw DataError("confusion: ground truth is not binary");
  const auto p = pred_mask.to(torch::kBool);
  const auto g = gt.to(torch::kBool);
  ConfusionCounts c;
  c.tp = p.logical_and(g).sum().item<std::int64_t>();
  c.fp = p.logical_and(g.logical_not()).sum().item<std::int64_t>();
  c.fn = p.logical_not().logical_and(g).sum().item<std::int64_t>();
  c.tn = p.numel() - c.tp - c.fp - c.fn;
  return c;
}

MetricsReport compute_metrics(const ConfusionCounts& counts) {
  MetricsReport r;
  r.counts = counts;
  const auto ratio = [&r](double num, double den, const char* name) {
    if (den <= 0.0) {
      r.degenerate.emplace_back(name);
      return 0.0;
    }
    return num / den;
  };
  const auto tp = static_cast<double>(counts.tp);
  const auto fp = static_cast<double>(counts.fp);
  const auto fn = static_cast<double>(counts.fn);
  const auto tn = static_cast<double>(counts.tn);
  r.precision = ratio(tp, tp + fp, "precision");
  r.recall = ratio(tp, tp + fn, "recall");
  r.f1 = ratio(2.0 * r.precision * r.recall, r.precision + r.recall, "f1");
  r.iou = ratio(tp, tp + fn + fp, "iou");
  r.oa = ratio(tp + tn, tp + tn + fn + fp, "oa");
  return r;
}

std::string to_json(const MetricsReport& report, int indent) {
  nlohmann::ordered_json j;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["iou"] = report.iou;
  j["oa"] = report.oa;
  j["counts"] = {{"tp", report.counts.tp}, {"fp", report.counts.fp}, {"fn", report.counts.fn}, {"tn", report.counts.tn}};
  j["degenerate"] = report.degenerate;
  return j.dump(indent);
}

MetricsReport metrics_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  MetricsReport r;
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.f1 = j.at("f1").get<double>();
  r.iou = j.at("iou").get<double>();
  r.oa = j.at("oa").get<double>();
  const auto& c = j.at("counts");
  r.counts = {c.at("tp").get<std::int64_t>(), c.at("fp").get<std::int64_t>(), c.at("fn").get<std::int64_t>(),
              c.at("tn").get<std::int64_t>()};
  if (j.contains("degenerate")) r.degenerate = j.at("degenerate").get<std::vector<std::string>>();
  return r;
}

}  // namespace smdnet::objectives
