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
// smdnet: train, evaluate, predict and ablate diffusion change-detection models.

#include "smdnet/data/io.hpp"
#include "smdnet/data/split.hpp"
#include "smdnet/data/synthetic.hpp"
#include "smdnet/data/tiling.hpp"
#include "smdnet/errors.hpp"
#include "smdnet/training/ablation.hpp"
#include "smdnet/training/checkpoint.hpp"
#include "smdnet/training/evaluate.hpp"
#include "smdnet/training/trainer.hpp"

#include <ATen/CPUGeneratorImpl.h>
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

namespace fs = std::filesystem;
using namespace smdnet;

namespace {

void log_line(const std::string& msg) { std::cerr << msg << std::endl; }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

// Whole images no larger than one tile pass through; larger ones are cut.
std::vector<data::BiTemporalPair> to_tiles(const std::vector<data::BiTemporalPair>& pairs,
                                           const training::RunConfig& cfg) {
  std::vector<data::BiTemporalPair> out;
  for (const auto& p : pairs) {
    if (p.height() <= cfg.tile_size && p.width() <= cfg.tile_size) {
      out.push_back(p);
      continue;
    }
    auto tiled = data::tile_pair(p, cfg.tile_size, cfg.tile_stride);
    for (const auto& w : tiled.warnings) log_line("warning: " + w);
    for (auto& t : tiled.tiles) out.push_back(std::move(t));
  }
  return out;
}

std::vector<data::BiTemporalPair> load_pairs(const fs::path& root, const training::RunConfig& cfg) {
  auto loaded = data::load_dataset(root);
  for (const auto& w : loaded.warnings) log_line("warning: " + w);
  if (loaded.pairs.empty()) throw DataError("no image pairs under " + root.string());
  return to_tiles(loaded.pairs, cfg);
}

std::vector<data::BiTemporalPair> select_ids(const std::vector<data::BiTemporalPair>& pairs,
                                             const std::vector<std::string>& ids) {
  std::map<std::string, const data::BiTemporalPair*> by_id;
  for (const auto& p : pairs) by_id.emplace(p.id(), &p);
  std::vector<data::BiTemporalPair> out;
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("split manifest names unknown pair '" + id + "'");
    out.push_back(*it->second);
  }
  return out;
}

void apply_threads(int threads) {
  if (threads > 0) torch::set_num_threads(threads);
}

// --- train ---------------------------------------------------------------

struct TrainArgs {
  fs::path config, data, out_dir = "run";
  std::string resume, encoder_checkpoint;
  bool synthetic = false;
  bool freeze_encoder = false;
  std::int64_t epochs = 0, max_steps = 0;
};

int run_train(const TrainArgs& a) {
  auto cfg = training::load_run_config(a.config);
  if (a.freeze_encoder) cfg.freeze_encoder = true;
  if (a.epochs > 0) cfg.epochs = a.epochs;
  if (a.max_steps > 0) cfg.max_steps = a.max_steps;
  cfg.validate();
  apply_threads(cfg.threads);

  if (a.synthetic) {
    log_line("generating " + std::to_string(cfg.synthetic.n_pairs) + " synthetic pairs into " + a.data.string());
    data::save_dataset(a.data, data::generate_synthetic(cfg.synthetic));
  }
  const auto pairs = load_pairs(a.data, cfg);
  const auto split = data::split_dataset(pairs, cfg.split);
  fs::create_directories(a.out_dir);
  data::write_split_manifest(a.out_dir / "split.json", split, cfg.split.seed);
  log_line("split: " + std::to_string(split.train.size()) + " train / " + std::to_string(split.test.size()) +
           " test / " + std::to_string(split.val.size()) + " val");
  if (split.train.empty()) throw DataError("training split is empty");

  auto trainer = a.resume.empty() ? training::Trainer(cfg) : training::Trainer::resume(a.resume);
  if (!a.encoder_checkpoint.empty()) training::load_encoder_weights(a.encoder_checkpoint, trainer.model());

  const auto t0 = std::chrono::steady_clock::now();
  const auto fit = trainer.fit(split.train, split.val, a.out_dir / "best.ckpt", log_line);
  trainer.save(a.out_dir / "last.ckpt");

  std::ostringstream losses;
  losses << "step,loss\n";
  for (std::size_t i = 0; i < fit.step_losses.size(); ++i) losses << i << ',' << fit.step_losses[i] << '\n';
  write_text(a.out_dir / "losses.csv", losses.str());

  nlohmann::ordered_json summary;
  summary["steps"] = trainer.step();
  summary["epochs"] = trainer.epoch();
  summary["first_loss"] = fit.step_losses.empty() ? 0.0 : fit.step_losses.front();
  summary["last_loss"] = fit.step_losses.empty() ? 0.0 : fit.step_losses.back();
  summary["best_epoch"] = fit.best_epoch;
  summary["best_val_f1"] = fit.best_f1;
  summary["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text(a.out_dir / "train_summary.json", summary.dump(2) + "\n");
  log_line("wrote " + (a.out_dir / "last.ckpt").string());
  return 0;
}

// --- eval ----------------------------------------------------------------

struct EvalArgs {
  fs::path checkpoint, data, out, manifest, figures;
  std::string split = "test";
  bool save_figures = false;
  std::uint64_t seed = 0;
  int threads = 0;
};

int run_eval(const EvalArgs& a) {
  apply_threads(a.threads);
  auto loaded = training::load_model(a.checkpoint);
  const auto& cfg = loaded.meta.config;
  auto pairs = load_pairs(a.data, cfg);
  if (!a.manifest.empty()) {
    std::ifstream in(a.manifest);
    if (!in) throw ConfigError("cannot open split manifest " + a.manifest.string());
    const auto j = nlohmann::json::parse(in);
    if (!j.contains(a.split)) throw ConfigError("split manifest has no '" + a.split + "' list");
    pairs = select_ids(pairs, j.at(a.split).get<std::vector<std::string>>());
  }
  if (pairs.empty()) throw DataError("evaluation split is empty");

  training::EvalOptions opts;
  opts.noise_seed = a.seed;
  opts.batch_size = cfg.batch_size;
  if (a.save_figures) {
    opts.figure_dir = a.figures.empty() ? fs::path(a.out).replace_extension("").concat("_figures") : a.figures;
  }
  const auto sched = diffusion::make_schedule(cfg.T, cfg.schedule);
  const auto result = training::evaluate(loaded.model, pairs, diffusion::make_plan(cfg.T, cfg.n_sub_steps), sched, opts);
  write_text(a.out, result.to_json());
  std::cout << result.to_json();
  return 0;
}

// --- predict -------------------------------------------------------------

struct PredictArgs {
  fs::path checkpoint, t1, t2, out;
  std::uint64_t seed = 0;
  int threads = 0;
};

int run_predict(const PredictArgs& a) {
  apply_threads(a.threads);
  auto loaded = training::load_model(a.checkpoint);
  const auto& cfg = loaded.meta.config;
  const auto t1 = data::read_rgb(a.t1);
  const auto t2 = data::read_rgb(a.t2);
  if (!t1.sizes().equals(t2.sizes())) throw ShapeError("T1 and T2 images differ in size");
  auto gen = at::make_generator<at::CPUGeneratorImpl>(a.seed);
  const auto x_T = torch::randn({1, 1, t1.size(1), t1.size(2)}, gen, torch::kFloat32);
  const auto sched = diffusion::make_schedule(cfg.T, cfg.schedule);
  const auto mask = denoiser::predict_mask(loaded.model, t1.unsqueeze(0), t2.unsqueeze(0), x_T,
                                           diffusion::make_plan(cfg.T, cfg.n_sub_steps), sched);
  data::write_image(a.out, mask[0]);
  log_line("changed pixels: " + std::to_string(mask.sum().item<double>() / static_cast<double>(mask.numel())));
  return 0;
}

// --- ablate --------------------------------------------------------------

struct AblateArgs {
  std::string axis;
  fs::path config, out, data, markdown;
  std::int64_t max_steps = 0;
};

int run_ablate(const AblateArgs& a) {
  auto cfg = training::load_run_config(a.config);
  if (a.max_steps > 0) cfg.max_steps = a.max_steps;
  cfg.validate();
  apply_threads(cfg.threads);
  const auto axis = training::parse_ablation_axis(a.axis);

  std::vector<data::BiTemporalPair> pairs =
      a.data.empty() ? data::generate_synthetic(cfg.synthetic) : load_pairs(a.data, cfg);
  auto split = data::split_dataset(pairs, cfg.split);
  const auto table = training::ablate(axis, cfg, split.train, split.test, log_line);

  write_text(a.out, table.to_csv());
  const auto md = a.markdown.empty() ? fs::path(a.out).replace_extension(".md") : a.markdown;
  write_text(md, table.to_markdown());
  std::cout << table.to_markdown();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion-based bi-temporal change detection"};
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("--config", ta.config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
  train->add_option("--data", ta.data, "Dataset root with A/, B/, label/")->required();
  train->add_flag("--synthetic", ta.synthetic, "Generate the synthetic set into --data first");
  train->add_flag("--freeze-encoder", ta.freeze_encoder, "Stop gradients into the Siamese encoder");
  train->add_option("--encoder-checkpoint", ta.encoder_checkpoint, "Load encoder weights from this checkpoint");
  train->add_option("--resume", ta.resume, "Continue from a checkpoint");
  train->add_option("--out-dir", ta.out_dir, "Output directory for checkpoints and logs")->capture_default_str();
  train->add_option("--epochs", ta.epochs, "Override epochs");
  train->add_option("--max-steps", ta.max_steps, "Override the optimizer step cap");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", ea.checkpoint)->required()->check(CLI::ExistingFile);
  eval->add_option("--data", ea.data, "Dataset root")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--out", ea.out, "Metrics report (JSON)")->required();
  eval->add_flag("--save-figures", ea.save_figures, "Write T1 | T2 | overlay PNG triptychs");
  eval->add_option("--figures-dir", ea.figures, "Triptych directory (default: <out>_figures)");
  eval->add_option("--manifest", ea.manifest, "Split manifest; evaluates only --split")->check(CLI::ExistingFile);
  eval->add_option("--split", ea.split, "Manifest list to evaluate")
      ->check(CLI::IsMember({"train", "test", "val"}))
      ->capture_default_str();
  eval->add_option("--seed", ea.seed, "Initial-noise seed")->capture_default_str();
  eval->add_option("--threads", ea.threads, "Intra-op threads (0 = library default)");

  PredictArgs pa;
  auto* predict = app.add_subcommand("predict", "Predict a change mask for one image pair");
  predict->add_option("--checkpoint", pa.checkpoint)->required()->check(CLI::ExistingFile);
  predict->add_option("--t1", pa.t1, "Pre-change image")->required()->check(CLI::ExistingFile);
  predict->add_option("--t2", pa.t2, "Post-change image")->required()->check(CLI::ExistingFile);
  predict->add_option("--out", pa.out, "Output mask PNG")->required();
  predict->add_option("--seed", pa.seed, "Initial-noise seed")->capture_default_str();
  predict->add_option("--threads", pa.threads, "Intra-op threads (0 = library default)");

  AblateArgs aa;
  auto* ablate = app.add_subcommand("ablate", "Sweep one ablation axis");
  ablate->add_option("--axis", aa.axis)->required()->check(CLI::IsMember({"layers", "attention", "steps"}));
  ablate->add_option("--config", aa.config)->required()->check(CLI::ExistingFile);
  ablate->add_option("--out", aa.out, "Comparison table (CSV)")->required();
  ablate->add_option("--data", aa.data, "Dataset root (default: synthetic set from the config)")
      ->check(CLI::ExistingDirectory);
  ablate->add_option("--markdown", aa.markdown, "Markdown table path (default: <out>.md)");
  ablate->add_option("--max-steps", aa.max_steps, "Override the per-cell optimizer step cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; bad arguments count as configuration errors
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*train) return run_train(ta);
    if (*eval) return run_eval(ea);
    if (*predict) return run_predict(pa);
    if (*ablate) return run_ablate(aa);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
