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
#include "smdnet/training/trainer.hpp"

#include "smdnet/errors.hpp"
#include "smdnet/objectives/losses.hpp"
#include "smdnet/random.hpp"
#include "smdnet/training/checkpoint.hpp"
#include "smdnet/training/evaluate.hpp"
#include "smdnet/training/lr_schedule.hpp"

#include <ATen/CPUGeneratorImpl.h>

#include <cmath>
#include <cstdio>
#include <numeric>

namespace smdnet::training {

Batch collate(std::span<const data::BiTemporalPair* const> pairs) {
  if (pairs.empty()) throw ConfigError("collate: empty batch");
  std::vector<torch::Tensor> t1, t2, mask;
  Batch batch;
  for (const auto* p : pairs) {
    t1.push_back(p->t1());
    t2.push_back(p->t2());
    mask.push_back(p->mask());
    batch.ids.push_back(p->id());
  }
  try {
    batch.t1 = torch::stack(t1);
    batch.t2 = torch::stack(t2);
    batch.mask = torch::stack(mask);
  } catch (const c10::Error&) {
    throw ShapeError("collate: pairs in a batch must share one spatial size");
  }
  return batch;
}

Batch collate(const std::vector<data::BiTemporalPair>& pairs) {
  std::vector<const data::BiTemporalPair*> ptrs;
  ptrs.reserve(pairs.size());
  for (const auto& p : pairs) ptrs.push_back(&p);
  return collate(std::span<const data::BiTemporalPair* const>(ptrs));
}

namespace {

const RunConfig& validated(const RunConfig& cfg) {
  cfg.validate();
  return cfg;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

}  // namespace

Trainer::Trainer(RunConfig cfg)
    : cfg_(validated(cfg)),
      schedule_(diffusion::make_schedule(cfg_.T, cfg_.schedule)),
      gen_(at::make_generator<at::CPUGeneratorImpl>(cfg_.seed)) {
  if (cfg_.threads > 0) torch::set_num_threads(cfg_.threads);
  torch::manual_seed(cfg_.seed);
  model_ = denoiser::SMDNet(cfg_.model_config());
  model_->set_encoder_frozen(cfg_.freeze_encoder);

  std::vector<torch::Tensor> trainable;
  for (auto& p : model_->parameters()) {
    if (p.requires_grad()) trainable.push_back(p);
  }
  optimizer_ = std::make_unique<torch::optim::AdamW>(
      trainable, torch::optim::AdamWOptions(cfg_.lr)
                     .betas({cfg_.adam_beta1, cfg_.adam_beta2})
                     .weight_decay(cfg_.weight_decay));
}

double Trainer::current_lr() const { return lr_at(step_, total_steps_, cfg_.lr, cfg_.warmup_fraction); }

diffusion::TimestepPlan Trainer::plan() const { return diffusion::make_plan(cfg_.T, cfg_.n_sub_steps, cfg_.eta); }

double Trainer::train_step(const Batch& batch) {
  model_->train();
  optimizer_->zero_grad();

  const auto b = batch.mask.size(0);
  auto t = torch::randint(1, cfg_.T + 1, {b}, gen_, torch::TensorOptions().dtype(torch::kInt64));
  auto eps = torch::randn(batch.mask.sizes(), gen_, batch.mask.options());
  auto x0 = diffusion::mask_to_signal(batch.mask);
  auto x_t = diffusion::q_sample(x0, t, eps, schedule_);

  auto f_diff = model_->condition(batch.t1, batch.t2);
  auto x0hat = model_->denoise(batch.t1, batch.t2, x_t, t, f_diff);

  torch::Tensor loss;
  switch (cfg_.objective) {
    case Objective::kX0DiceBce: loss = objectives::total_loss(x0hat, batch.mask); break;
    case Objective::kEpsMse:
      loss = diffusion::epsilon_mse(eps, diffusion::eps_from_x0(x_t, t, x0hat, schedule_));
      break;
  }
  const double value = loss.item<double>();
  if (!std::isfinite(value)) {
    throw TrainingError("non-finite loss at step " + std::to_string(step_) + " on batch [" + join_ids(batch.ids) + "]");
  }
  loss.backward();

  const double lr = current_lr();
  for (auto& group : optimizer_->param_groups()) {
    static_cast<torch::optim::AdamWOptions&>(group.options()).lr(lr);
  }
  optimizer_->step();
  ++step_;
  return value;
}

FitResult Trainer::fit(const std::vector<data::BiTemporalPair>& train, const std::vector<data::BiTemporalPair>& val,
                       const std::optional<std::filesystem::path>& best_checkpoint, const LogFn& log) {
  if (train.empty()) throw ConfigError("fit: empty training set");
  const auto n = static_cast<std::int64_t>(train.size());
  const std::int64_t per_epoch = (n + cfg_.batch_size - 1) / cfg_.batch_size;
  std::int64_t budget = cfg_.epochs * per_epoch;
  if (cfg_.max_steps > 0) budget = std::min(budget, cfg_.max_steps);
  set_total_steps(step_ + budget);
  const std::int64_t stop_at = total_steps_;

  FitResult result;
  std::vector<std::size_t> order(train.size());
  const auto eval_plan = plan();
  const auto epochs = cfg_.epochs;
  for (std::int64_t e = 1; e <= epochs && step_ < stop_at; ++e) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    PortableRng rng(cfg_.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(epoch_ + 1));
    rng.shuffle(std::span<std::size_t>(order));

    double epoch_loss = 0.0;
    std::int64_t epoch_steps = 0;
    for (std::int64_t start = 0; start < n && step_ < stop_at; start += cfg_.batch_size) {
      std::vector<const data::BiTemporalPair*> members;
      for (std::int64_t i = start; i < std::min(n, start + cfg_.batch_size); ++i) {
        members.push_back(&train[order[static_cast<std::size_t>(i)]]);
      }
      const double loss = train_step(collate(std::span<const data::BiTemporalPair* const>(members)));
      result.step_losses.push_back(loss);
      epoch_loss += loss;
      ++epoch_steps;
    }
    ++epoch_;
    if (log) {
      char line[160];
      std::snprintf(line, sizeof line, "epoch %lld step %lld loss %.5f lr %.3g", static_cast<long long>(epoch_),
                    static_cast<long long>(step_), epoch_loss / static_cast<double>(std::max<std::int64_t>(epoch_steps, 1)),
                    current_lr());
      log(line);
    }

    if (!val.empty() && epoch_ % cfg_.val_every == 0) {
      EvalOptions opts;
      opts.noise_seed = cfg_.seed;
      opts.batch_size = cfg_.batch_size;
      const auto eval = evaluate(model_, val, eval_plan, schedule_, opts);
      result.validations.push_back({epoch_, eval.report});
      if (log) log("  validation epoch " + std::to_string(epoch_) + " F1 " + std::to_string(eval.report.f1));
      if (eval.report.f1 > result.best_f1) {
        result.best_f1 = eval.report.f1;
        result.best_epoch = epoch_;
        if (best_checkpoint) save(*best_checkpoint);
      }
    }
  }
  return result;
}

void Trainer::save(const std::filesystem::path& path) const {
  CheckpointMeta meta;
  meta.config = cfg_;
  meta.epoch = epoch_;
  meta.step = step_;
  meta.rng_state = gen_.get_state();
  auto model = model_;
  save_checkpoint(path, meta, model, optimizer_.get());
}

Trainer Trainer::resume(const std::filesystem::path& path) {
  auto loaded = load_model(path);
  Trainer trainer(loaded.meta.config);
  torch::NoGradGuard no_grad;
  auto dst = trainer.model_->named_parameters();
  for (const auto& src : loaded.model->named_parameters()) dst[src.key()].copy_(src.value());
  auto dst_buf = trainer.model_->named_buffers();
  for (const auto& src : loaded.model->named_buffers()) dst_buf[src.key()].copy_(src.value());
  load_optimizer_state(path, *trainer.optimizer_);
  trainer.epoch_ = loaded.meta.epoch;
  trainer.step_ = loaded.meta.step;
  if (loaded.meta.rng_state) trainer.gen_.set_state(*loaded.meta.rng_state);
  return trainer;
}

}  // namespace smdnet::training
