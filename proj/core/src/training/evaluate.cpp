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
#include "smdnet/training/evaluate.hpp"

#include "smdnet/data/io.hpp"
#include "smdnet/errors.hpp"

#include <ATen/CPUGeneratorImpl.h>
#include <nlohmann/json.hpp>

namespace smdnet::training {

std::string EvaluationResult::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(objectives::to_json(report, 0));
  j["n_pairs"] = n_pairs;
  j["sampling"] = {{"total_steps", total_steps}, {"sub_steps", sub_steps}, {"eta", 0.0}};
  return j.dump(2) + "\n";
}

torch::Tensor make_triptych(const data::BiTemporalPair& pair, const torch::Tensor& pred_mask) {
  const auto pred = pred_mask.reshape({1, pair.height(), pair.width()}).to(torch::kFloat32);
  const auto gt = pair.mask();
  const auto hit = pred * gt;
  const auto false_alarm = pred * (1 - gt);
  const auto miss = (1 - pred) * gt;
  // hits white, false alarms red, misses green over a dimmed T2
  const auto background = pair.t2() * 0.35 * (1 - hit - false_alarm - miss);
  const auto r = hit + false_alarm;
  const auto g = hit + miss;
  const auto b = hit;
  const auto overlay = background + torch::cat({r, g, b}, 0);
  return torch::cat({pair.t1(), pair.t2(), overlay.clamp(0.0, 1.0)}, 2);
}

EvaluationResult evaluate(denoiser::SMDNet& model, const std::vector<data::BiTemporalPair>& pairs,
                          const diffusion::TimestepPlan& plan, const diffusion::NoiseSchedule& sched,
                          const EvalOptions& options) {
  if (pairs.empty()) throw DataError("evaluate: empty split");
  if (options.batch_size < 1) throw ConfigError("evaluate: batch_size must be >= 1");
  auto deterministic = plan;
  deterministic.eta = 0.0;
  deterministic.validate(sched.steps());

  EvaluationResult result;
  result.total_steps = sched.steps();
  result.sub_steps = deterministic.sub_steps;
  result.n_pairs = static_cast<std::int64_t>(pairs.size());

  objectives::ConfusionCounts counts;
  std::size_t i = 0;
  while (i < pairs.size()) {
    // batch consecutive pairs of one size
    std::size_t end = i + 1;
    while (end < pairs.size() && end - i < static_cast<std::size_t>(options.batch_size) &&
           pairs[end].height() == pairs[i].height() && pairs[end].width() == pairs[i].width()) {
      ++end;
    }
    std::vector<torch::Tensor> t1, t2, noise;
    for (std::size_t k = i; k < end; ++k) {
      t1.push_back(pairs[k].t1());
      t2.push_back(pairs[k].t2());
      auto gen = at::make_generator<at::CPUGeneratorImpl>(options.noise_seed + k);
      noise.push_back(torch::randn({1, pairs[k].height(), pairs[k].width()}, gen, torch::kFloat32));
    }
    const auto pred = denoiser::predict_mask(model, torch::stack(t1), torch::stack(t2), torch::stack(noise),
                                             deterministic, sched);
    for (std::size_t k = i; k < end; ++k) {
      const auto mask = pred[static_cast<std::int64_t>(k - i)];
      counts += objectives::confusion(mask, pairs[k].mask());
      if (options.figure_dir) {
        data::write_image(*options.figure_dir / (pairs[k].id() + ".png"), make_triptych(pairs[k], mask));
      }
    }
    i = end;
  }
  result.report = objectives::compute_metrics(counts);
  return result;
}

}  // namespace smdnet::training
