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
#include "smdnet/training/config.hpp"

#include "smdnet/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace smdnet::training {

Objective parse_objective(std::string_view name) {
  if (name == "x0_dice_bce") return Objective::kX0DiceBce;
  if (name == "eps_mse") return Objective::kEpsMse;
  throw ConfigError("unknown objective '" + std::string(name) + "' (expected x0_dice_bce or eps_mse)");
}

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::kX0DiceBce: return "x0_dice_bce";
    case Objective::kEpsMse: return "eps_mse";
  }
  return "?";
}

void RunConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be >= 0");
  if (warmup_fraction < 0.0 || warmup_fraction >= 1.0) throw ConfigError("warmup_fraction must lie in [0, 1)");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (val_every < 1) throw ConfigError("val_every must be >= 1");
  if (max_steps < 0) throw ConfigError("max_steps must be >= 0");
  if (T < 1) throw ConfigError("T must be >= 1");
  if (n_sub_steps < 1 || n_sub_steps > T) throw ConfigError("n_sub_steps must lie in [1, T]");
  if (eta < 0.0 || eta > 1.0) throw ConfigError("eta must lie in [0, 1]");
  if (time_embed_dim < 2 || time_embed_dim % 2 != 0) throw ConfigError("time_embed_dim must be even");
  if (tile_size < 1 || tile_stride < 1) throw ConfigError("tile_size and tile_stride must be >= 1");
  split.validate();
  synthetic.validate();
  model_config().validate();
}

encoder::EncoderConfig RunConfig::encoder_config() const {
  auto enc = encoder::EncoderConfig::preset(n_layers, attention_kind);
  if (!channels.empty()) enc.channels = channels;
  return enc;
}

denoiser::ModelConfig RunConfig::model_config() const {
  return denoiser::ModelConfig::make(encoder_config(), time_embed_dim);
}

namespace {

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (const auto v = node[key]) out = v.as<T>();
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& yaml) {
  RunConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid YAML: ") + e.what());
  }
  if (!root || root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError("run config must be a YAML mapping");

  check_keys(root,
             {"batch_size", "lr", "weight_decay", "adam_beta1", "adam_beta2", "warmup_fraction", "epochs", "val_every",
              "max_steps", "T", "schedule", "n_sub_steps", "eta", "n_layers", "channels", "attention_kind",
              "time_embed_dim", "objective", "freeze_encoder", "seed", "threads", "tile_size", "tile_stride", "split",
              "synthetic"},
             "");
  try {
    read(root, "batch_size", cfg.batch_size);
    read(root, "lr", cfg.lr);
    read(root, "weight_decay", cfg.weight_decay);
    read(root, "adam_beta1", cfg.adam_beta1);
    read(root, "adam_beta2", cfg.adam_beta2);
    read(root, "warmup_fraction", cfg.warmup_fraction);
    read(root, "epochs", cfg.epochs);
    read(root, "val_every", cfg.val_every);
    read(root, "max_steps", cfg.max_steps);
    read(root, "T", cfg.T);
    if (root["schedule"]) cfg.schedule = diffusion::parse_schedule_kind(root["schedule"].as<std::string>());
    read(root, "n_sub_steps", cfg.n_sub_steps);
    read(root, "eta", cfg.eta);
    read(root, "n_layers", cfg.n_layers);
    read(root, "channels", cfg.channels);
    if (root["attention_kind"]) {
      cfg.attention_kind = encoder::parse_attention_kind(root["attention_kind"].as<std::string>());
    }
    read(root, "time_embed_dim", cfg.time_embed_dim);
    if (root["objective"]) cfg.objective = parse_objective(root["objective"].as<std::string>());
    read(root, "freeze_encoder", cfg.freeze_encoder);
    read(root, "seed", cfg.seed);
    read(root, "threads", cfg.threads);
    read(root, "tile_size", cfg.tile_size);
    read(root, "tile_stride", cfg.tile_stride);
    if (const auto s = root["split"]) {
      check_keys(s, {"train_ratio", "test_ratio", "val_ratio", "seed"}, "split.");
      read(s, "train_ratio", cfg.split.train_ratio);
      read(s, "test_ratio", cfg.split.test_ratio);
      read(s, "val_ratio", cfg.split.val_ratio);
      read(s, "seed", cfg.split.seed);
    }
    if (const auto s = root["synthetic"]) {
      check_keys(s, {"n_pairs", "size", "change_fraction", "photometric_jitter", "seed"}, "synthetic.");
      read(s, "n_pairs", cfg.synthetic.n_pairs);
      read(s, "size", cfg.synthetic.size);
      read(s, "change_fraction", cfg.synthetic.change_fraction);
      read(s, "photometric_jitter", cfg.synthetic.photometric_jitter);
      read(s, "seed", cfg.synthetic.seed);
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("bad value in run config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string to_yaml(const RunConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "batch_size" << YAML::Value << cfg.batch_size;
  out << YAML::Key << "lr" << YAML::Value << cfg.lr;
  out << YAML::Key << "weight_decay" << YAML::Value << cfg.weight_decay;
  out << YAML::Key << "adam_beta1" << YAML::Value << cfg.adam_beta1;
  out << YAML::Key << "adam_beta2" << YAML::Value << cfg.adam_beta2;
  out << YAML::Key << "warmup_fraction" << YAML::Value << cfg.warmup_fraction;
  out << YAML::Key << "epochs" << YAML::Value << cfg.epochs;
  out << YAML::Key << "val_every" << YAML::Value << cfg.val_every;
  out << YAML::Key << "max_steps" << YAML::Value << cfg.max_steps;
  out << YAML::Key << "T" << YAML::Value << cfg.T;
  out << YAML::Key << "schedule" << YAML::Value << std::string(diffusion::to_string(cfg.schedule));
  out << YAML::Key << "n_sub_steps" << YAML::Value << cfg.n_sub_steps;
  out << YAML::Key << "eta" << YAML::Value << cfg.eta;
  out << YAML::Key << "n_layers" << YAML::Value << cfg.n_layers;
  out << YAML::Key << "channels" << YAML::Value << YAML::Flow << cfg.channels;
  out << YAML::Key << "attention_kind" << YAML::Value << std::string(encoder::to_string(cfg.attention_kind));
  out << YAML::Key << "time_embed_dim" << YAML::Value << cfg.time_embed_dim;
  out << YAML::Key << "objective" << YAML::Value << std::string(to_string(cfg.objective));
  out << YAML::Key << "freeze_encoder" << YAML::Value << cfg.freeze_encoder;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::Key << "threads" << YAML::Value << cfg.threads;
  out << YAML::Key << "tile_size" << YAML::Value << cfg.tile_size;
  out << YAML::Key << "tile_stride" << YAML::Value << cfg.tile_stride;
  out << YAML::Key << "split" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "train_ratio" << YAML::Value << cfg.split.train_ratio;
  out << YAML::Key << "test_ratio" << YAML::Value << cfg.split.test_ratio;
  out << YAML::Key << "val_ratio" << YAML::Value << cfg.split.val_ratio;
  out << YAML::Key << "seed" << YAML::Value << cfg.split.seed;
  out << YAML::EndMap;
  out << YAML::Key << "synthetic" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_pairs" << YAML::Value << cfg.synthetic.n_pairs;
  out << YAML::Key << "size" << YAML::Value << cfg.synthetic.size;
  out << YAML::Key << "change_fraction" << YAML::Value << cfg.synthetic.change_fraction;
  out << YAML::Key << "photometric_jitter" << YAML::Value << cfg.synthetic.photometric_jitter;
  out << YAML::Key << "seed" << YAML::Value << cfg.synthetic.seed;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace smdnet::training
