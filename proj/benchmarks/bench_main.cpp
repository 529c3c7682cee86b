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
#include "smdnet/data/synthetic.hpp"
#include "smdnet/denoiser/model.hpp"
#include "smdnet/diffusion/process.hpp"
#include "smdnet/encoder/rsu.hpp"
#include "smdnet/objectives/metrics.hpp"
#include "smdnet/training/trainer.hpp"

#include <ATen/CPUGeneratorImpl.h>
#include <benchmark/benchmark.h>

namespace {

using namespace smdnet;

void BM_RsuForward(benchmark::State& state) {
  torch::NoGradGuard ng;
  const auto side = state.range(0);
  encoder::RSU block(encoder::RSUConfig{7, 3, 16, 64, false});
  block->eval();
  const auto x = torch::rand({1, 3, side, side});
  for (auto _ : state) benchmark::DoNotOptimize(block->forward(x));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_RsuForward)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_DdimSample(benchmark::State& state) {
  torch::NoGradGuard ng;
  torch::manual_seed(0);
  denoiser::SMDNet model(denoiser::ModelConfig::make(encoder::EncoderConfig::preset(4)));
  model->eval();
  const auto sched = diffusion::make_schedule(1000);
  const auto plan = diffusion::make_plan(1000, state.range(0));
  const auto t1 = torch::rand({1, 3, 64, 64});
  const auto t2 = torch::rand({1, 3, 64, 64});
  auto gen = at::make_generator<at::CPUGeneratorImpl>(1);
  for (auto _ : state) benchmark::DoNotOptimize(denoiser::predict_mask(model, t1, t2, plan, sched, gen));
}
BENCHMARK(BM_DdimSample)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Confusion(benchmark::State& state) {
  const auto side = state.range(0);
  const auto pred = torch::rand({1, 1, side, side}).gt(0.5).to(torch::kFloat32);
  const auto gt = torch::rand({1, 1, side, side}).gt(0.9).to(torch::kFloat32);
  for (auto _ : state) benchmark::DoNotOptimize(objectives::confusion(pred, gt));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Confusion)->Arg(256)->Arg(1024);

void BM_TrainStep(benchmark::State& state) {
  training::RunConfig cfg;
  cfg.n_layers = 4;
  cfg.T = 100;
  data::SyntheticConfig syn;
  syn.n_pairs = 8;
  syn.size = state.range(0);
  const auto batch = training::collate(data::generate_synthetic(syn));
  training::Trainer trainer(cfg);
  trainer.set_total_steps(1'000'000);
  for (auto _ : state) benchmark::DoNotOptimize(trainer.train_step(batch));
}
BENCHMARK(BM_TrainStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
