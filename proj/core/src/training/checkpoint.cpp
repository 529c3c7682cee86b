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
#include "smdnet/training/checkpoint.hpp"

#include "smdnet/errors.hpp"

namespace smdnet::training {

namespace {

constexpr std::int64_t kFormatVersion = 1;

torch::serialize::InputArchive open(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("checkpoint not found: " + path.string());
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path.string());
  } catch (const c10::Error& e) {
    throw DataError("cannot read checkpoint " + path.string() + ": " + e.what_without_backtrace());
  }
  return archive;
}

c10::IValue read_value(torch::serialize::InputArchive& archive, const char* key, const std::filesystem::path& path) {
  c10::IValue v;
  if (!archive.try_read(key, v)) throw DataError("checkpoint " + path.string() + " lacks '" + key + "'");
  return v;
}

CheckpointMeta read_meta(torch::serialize::InputArchive& archive, const std::filesystem::path& path) {
  const auto version = read_value(archive, "format_version", path).toInt();
  if (version != kFormatVersion) {
    throw DataError("checkpoint " + path.string() + " has unsupported format version " + std::to_string(version));
  }
  CheckpointMeta meta;
  meta.config = parse_run_config(read_value(archive, "config", path).toStringRef());
  meta.epoch = read_value(archive, "epoch", path).toInt();
  meta.step = read_value(archive, "step", path).toInt();
  torch::Tensor rng;
  if (archive.try_read("rng_state", rng)) meta.rng_state = rng;
  return meta;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const CheckpointMeta& meta, denoiser::SMDNet& model,
                     const torch::optim::Optimizer* optimizer) {
  torch::serialize::OutputArchive archive;
  archive.write("format_version", c10::IValue(kFormatVersion));
  archive.write("config", c10::IValue(to_yaml(meta.config)));
  archive.write("epoch", c10::IValue(meta.epoch));
  archive.write("step", c10::IValue(meta.step));
  if (meta.rng_state) archive.write("rng_state", *meta.rng_state, /*is_buffer=*/true);

  torch::serialize::OutputArchive model_archive;
  model->save(model_archive);
  archive.write("model", model_archive);
  if (optimizer != nullptr) {
    torch::serialize::OutputArchive opt_archive;
    optimizer->save(opt_archive);
    archive.write("optimizer", opt_archive);
  }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // write-then-rename so an interrupted save never clobbers a good file
  auto tmp = path;
  tmp += ".tmp";
  archive.save_to(tmp.string());
  std::filesystem::rename(tmp, path);
}

CheckpointMeta read_checkpoint_meta(const std::filesystem::path& path) {
  auto archive = open(path);
  return read_meta(archive, path);
}

LoadedModel load_model(const std::filesystem::path& path) {
  auto archive = open(path);
  LoadedModel out;
  out.meta = read_meta(archive, path);
  out.model = denoiser::SMDNet(out.meta.config.model_config());
  torch::serialize::InputArchive model_archive;
  if (!archive.try_read("model", model_archive)) throw DataError("checkpoint " + path.string() + " lacks model weights");
  try {
    out.model->load(model_archive);
  } catch (const c10::Error& e) {
    throw DataError("checkpoint " + path.string() + " does not match its config: " + e.what_without_backtrace());
  }
  out.model->set_encoder_frozen(out.meta.config.freeze_encoder);
  out.model->eval();
  return out;
}

void load_optimizer_state(const std::filesystem::path& path, torch::optim::Optimizer& optimizer) {
  auto archive = open(path);
  torch::serialize::InputArchive opt_archive;
  if (!archive.try_read("optimizer", opt_archive)) {
    throw DataError("checkpoint " + path.string() + " holds no optimizer state");
  }
  optimizer.load(opt_archive);
}

void load_encoder_weights(const std::filesystem::path& path, denoiser::SMDNet& model) {
  auto src = load_model(path);
  torch::NoGradGuard no_grad;
  auto dst = model->siamese()->named_parameters();
  const auto from = src.model->siamese()->named_parameters();
  if (dst.size() != from.size()) throw ConfigError("encoder in " + path.string() + " has a different architecture");
  for (const auto& p : from) {
    auto* target = dst.find(p.key());
    if (target == nullptr || !target->sizes().equals(p.value().sizes())) {
      throw ConfigError("encoder in " + path.string() + " does not match at '" + p.key() + "'");
    }
    target->copy_(p.value());
  }
}

}  // namespace smdnet::training
