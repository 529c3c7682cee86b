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
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   smdnet_acceptance [--criterion N]... [--tool path/to/smdnet] [--workdir dir]

#include "smdnet/data/io.hpp"
#include "smdnet/data/synthetic.hpp"
#include "smdnet/diffusion/process.hpp"
#include "smdnet/diffusion/schedule.hpp"
#include "smdnet/encoder/attention.hpp"
#include "smdnet/encoder/siamese.hpp"
#include "smdnet/objectives/metrics.hpp"
#include "smdnet/random.hpp"
#include "smdnet/training/ablation.hpp"
#include "smdnet/training/checkpoint.hpp"
#include "smdnet/training/evaluate.hpp"
#include "smdnet/training/trainer.hpp"

#include <ATen/CPUGeneratorImpl.h>
#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace smdnet;

namespace {

struct Context {
  fs::path workdir;
  std::string tool;
};

// Collects failed checks; a criterion passes when none fail.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- 1. diffusion numerics ------------------------------------------------

void diffusion_numerics(Checks& c, const Context&) {
  const auto s = diffusion::make_schedule(1000);
  bool mono = true;
  for (std::int64_t t = 1; t <= 1000; ++t) {
    mono = mono && s.alpha_bar(t) < s.alpha_bar(t - 1) && s.alpha_bar(t) > 0.0 &&
           s.alpha_bar(t) == s.alpha_bar(t - 1) * s.alpha(t) && (t == 1 || s.beta(t) >= s.beta(t - 1));
  }
  c.expect(mono, "schedule not monotone / recurrence broken");

  auto gen = at::make_generator<at::CPUGeneratorImpl>(1);
  auto x0 = torch::rand({256}, gen, torch::kFloat64) * 2 - 1;
  auto eps = torch::randn({256}, gen, torch::kFloat64);
  double worst_rel = 0.0;
  for (std::int64_t t = 1; t <= 1000; ++t) {
    const auto back = diffusion::eps_from_x0(diffusion::q_sample(x0, t, eps, s), t, x0, s);
    worst_rel = std::max(worst_rel, ((back - eps).abs() / eps.abs().clamp_min(1e-12)).max().item<double>());
  }
  c.expect(worst_rel < 1e-6, "round-trip relative error " + fmt("%.3g", worst_rel));
  c.note("round-trip max rel err " + fmt("%.2e", worst_rel));

  const auto s100 = diffusion::make_schedule(100);
  const auto ab = oracle::linear_alpha_bar(100);
  double worst_sigma = 0.0;
  for (std::int64_t t = 2; t <= 100; ++t) {
    const double sig = diffusion::sigma_t(t, t - 1, 1.0, s100);
    worst_sigma = std::max(worst_sigma, std::abs(sig * sig - oracle::ddpm_posterior_variance(ab, t)));
  }
  c.expect(worst_sigma < 1e-10, "eta=1 sigma^2 vs posterior variance " + fmt("%.3g", worst_sigma));
  c.note("sigma^2 max abs diff " + fmt("%.2e", worst_sigma));

  double worst_same = 0.0;
  bool terminal_exact = true;
  for (std::int64_t t = 1; t <= 1000; t += 37) {
    const auto x_t = diffusion::q_sample(x0, t, eps, s);
    worst_same = std::max(worst_same, (diffusion::ddim_step(x_t, t, t, x0, 0.0, {}, s) - x_t).abs().max().item<double>());
    for (double eta : {0.0, 0.5, 1.0}) {
      terminal_exact = terminal_exact &&
                       torch::equal(diffusion::ddim_step(x_t, t, 0, x0, eta, torch::randn_like(x_t), s), x0);
    }
  }
  c.expect(worst_same < 1e-12, "t_prev=t reconstruction error " + fmt("%.3g", worst_same));
  c.expect(terminal_exact, "t_prev=0 step does not return x0hat exactly");
}

// --- 2. marginal statistics ----------------------------------------------

void marginal_statistics(Checks& c, const Context&) {
  const auto s = diffusion::make_schedule(1000);
  const std::int64_t n = 100000;
  const double x0v = 0.7;
  auto gen = at::make_generator<at::CPUGeneratorImpl>(2024);
  for (std::int64_t t : {1, 500, 1000}) {
    const auto eps = torch::randn({n}, gen, torch::kFloat64);
    const auto x_t = diffusion::q_sample(torch::full({n}, x0v, torch::kFloat64), t, eps, s);
    const double ab = s.alpha_bar(t);
    const double mean_expected = std::sqrt(ab) * x0v;
    const double var_expected = 1.0 - ab;
    const double mean = x_t.mean().item<double>();
    const double var = x_t.var().item<double>();
    const double se_mean = std::sqrt(var_expected / static_cast<double>(n));
    const double se_var = var_expected * std::sqrt(2.0 / static_cast<double>(n - 1));
    const double z_mean = (mean - mean_expected) / se_mean;
    const double z_var = (var - var_expected) / se_var;
    c.expect(std::abs(z_mean) < 3.0, "t=" + std::to_string(t) + " mean off by " + fmt("%.2f", z_mean) + " SE");
    c.expect(std::abs(z_var) < 3.0, "t=" + std::to_string(t) + " variance off by " + fmt("%.2f", z_var) + " SE");
    c.note("t=" + std::to_string(t) + ": z_mean " + fmt("%+.2f", z_mean) + ", z_var " + fmt("%+.2f", z_var));
  }
}

// --- 3. DDIM(eta=1, full length) vs ancestral DDPM ------------------------

void sampler_equivalence(Checks& c, const Context&) {
  const std::int64_t T = 1000;
  const std::int64_t n = 10000;
  const auto s = diffusion::make_schedule(T);
  const auto ab = oracle::linear_alpha_bar(T);
  const oracle::TwoModeTarget target;
  const auto x0_of = [&](const torch::Tensor& x, std::int64_t t) {
    return target.posterior_mean(x, ab[static_cast<std::size_t>(t)]);
  };
  auto g_ddim = at::make_generator<at::CPUGeneratorImpl>(31);
  auto g_ddpm = at::make_generator<at::CPUGeneratorImpl>(32);
  diffusion::SamplerOptions raw;
  raw.clip_x0 = false;
  const auto ddim = diffusion::ddim_sample(x0_of, torch::randn({n}, g_ddim, torch::kFloat64),
                                           diffusion::make_plan(T, T, 1.0), s, g_ddim, raw);
  const auto ddpm = oracle::ddpm_ancestral(x0_of, torch::randn({n}, g_ddpm, torch::kFloat64), ab, g_ddpm);
  const auto [stat, df] = oracle::two_sample_chi_square(ddim, ddpm, -1.5, 1.5, 30);
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat));
  c.expect(p > 0.01, "chi-square p = " + fmt("%.4g", p));
  c.note("chi2 " + fmt("%.2f", stat) + " on " + std::to_string(df) + " dof, p = " + fmt("%.3f", p));

  // sanity: the target really is bimodal and both samplers found both modes
  for (const auto* x : {&ddim, &ddpm}) {
    const double pos = x->gt(0).to(torch::kFloat64).mean().item<double>();
    c.expect(pos > 0.4 && pos < 0.6, "mode balance " + fmt("%.3f", pos));
  }
}

// --- 4. metrics ----------------------------------------------------------

void metric_oracles(Checks& c, const Context&) {
  const auto m = objectives::compute_metrics({3, 1, 2, 4});
  c.expect(std::abs(m.precision - 0.75) < 1e-4 && std::abs(m.recall - 0.6) < 1e-4 && std::abs(m.f1 - 0.6667) < 1e-4 &&
               std::abs(m.iou - 0.5) < 1e-4 && std::abs(m.oa - 0.7) < 1e-4,
           "hand example mismatch");

  const objectives::ConfusionCounts reference{8691LL * 8017, 8017LL * 1309, 8691LL * 1983, 0};
  const auto r = objectives::compute_metrics(reference);
  c.expect(std::abs(r.f1 * 100 - 83.40) <= 0.01, "reference F1 " + fmt("%.4f", r.f1 * 100));
  c.expect(std::abs(r.iou * 100 - 71.53) <= 0.01, "reference IoU " + fmt("%.4f", r.iou * 100));
  c.note("baseline row: F1 " + fmt("%.2f", r.f1 * 100) + ", IoU " + fmt("%.2f", r.iou * 100));

  PortableRng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const objectives::ConfusionCounts k{rng.uniform_int(1, 1000000), rng.uniform_int(0, 1000000),
                                        rng.uniform_int(0, 1000000), rng.uniform_int(0, 1000000)};
    const auto q = objectives::compute_metrics(k);
    worst = std::max(worst, std::abs(q.iou - q.f1 / (2.0 - q.f1)));
  }
  c.expect(worst <= 1e-9, "IoU identity error " + fmt("%.3g", worst));
}

// --- 5. architecture invariants ------------------------------------------

void architecture_invariants(Checks& c, const Context&) {
  torch::NoGradGuard ng;
  torch::manual_seed(5);
  denoiser::SMDNet model(denoiser::ModelConfig::make(encoder::EncoderConfig::preset(4)));
  model->eval();
  auto x = torch::rand({2, 3, 64, 64});
  const auto [fa, fb] = model->siamese()->encode(x, x.clone());
  bool symmetric = true;
  for (std::size_t i = 0; i < fa.size(); ++i) symmetric = symmetric && torch::equal(fa[i], fb[i]);
  const auto diff = model->condition(x, x.clone());
  for (const auto& l : diff.levels) symmetric = symmetric && l.abs().max().item<float>() == 0.0F;
  c.expect(symmetric, "identical inputs give a non-zero difference pyramid");

  auto x_t = torch::randn({2, 1, 64, 64});
  auto t = torch::tensor({7, 70}, torch::kInt64);
  c.expect(torch::equal(model->denoise(x, x, x_t, t, diff), model->denoise_unconditional(x, x, x_t, t)),
           "zero conditioning differs from the unconditional path");

  for (auto kind : {encoder::AttentionKind::kSA, encoder::AttentionKind::kECA, encoder::AttentionKind::kNL,
                    encoder::AttentionKind::kAX, encoder::AttentionKind::kNone}) {
    for (auto shape : {std::vector<std::int64_t>{2, 64, 32, 32}, {1, 128, 8, 8}, {1, 3, 7, 13}}) {
      encoder::AttentionGate gate(kind, shape[1]);
      const auto f = torch::randn(shape);
      c.expect(gate->forward(f).sizes() == f.sizes(),
               std::string("attention ") + std::string(encoder::to_string(kind)) + " changes shape");
    }
  }

  std::vector<std::int64_t> params;
  for (int n : {4, 5, 6}) {
    params.push_back(encoder::parameter_count(*denoiser::SMDNet(denoiser::ModelConfig::make(encoder::EncoderConfig::preset(n)))));
  }
  c.expect(params[0] < params[1] && params[1] < params[2], "parameter counts not increasing with depth");
  c.note("params 4/5/6 layers: " + training::format_parameter_count(params[0]) + " / " +
         training::format_parameter_count(params[1]) + " / " + training::format_parameter_count(params[2]));
}

// --- 6. gradient completeness --------------------------------------------

void gradient_completeness(Checks& c, const Context&) {
  training::RunConfig cfg;
  cfg.n_layers = 4;
  cfg.T = 100;
  data::SyntheticConfig syn;
  syn.n_pairs = 8;
  syn.size = 32;
  syn.seed = 6;
  const auto batch = training::collate(data::generate_synthetic(syn));
  training::Trainer trainer(cfg);
  trainer.set_total_steps(100);
  const double loss = trainer.train_step(batch);
  c.expect(std::isfinite(loss), "loss not finite");
  std::int64_t dead = 0;
  std::int64_t total = 0;
  for (const auto& p : trainer.model()->named_parameters()) {
    if (!p.value().requires_grad()) continue;
    ++total;
    if (!p.value().grad().defined() || p.value().grad().abs().sum().item<double>() == 0.0) {
      ++dead;
      c.expect(false, "zero gradient: " + p.key());
    }
  }
  c.note(std::to_string(total - dead) + "/" + std::to_string(total) + " parameter tensors receive gradient; loss " +
         fmt("%.4f", loss));
}

// --- 7. desk-scale overfit -----------------------------------------------

void desk_scale_overfit(Checks& c, const Context& ctx) {
  training::RunConfig cfg;
  cfg.n_layers = 4;
  cfg.T = 100;
  cfg.n_sub_steps = 10;
  cfg.batch_size = 8;
  cfg.epochs = 250;  // 64 pairs / 8 = 8 steps per epoch -> 2000 steps
  cfg.max_steps = 2000;
  cfg.synthetic.n_pairs = 64;
  cfg.synthetic.size = 32;
  cfg.synthetic.seed = 7;
  const auto pairs = data::generate_synthetic(cfg.synthetic);

  training::Trainer trainer(cfg);
  const auto fit = trainer.fit(pairs, {}, std::nullopt, [](const std::string& line) {
    if (line.rfind("epoch ", 0) == 0 && (line.find("epoch 1 ") == 0 || line.find("0 step") != std::string::npos)) {
      std::cerr << "    " << line << '\n';
    }
  });
  const std::size_t per_epoch = 8;
  c.expect(fit.step_losses.size() <= 2000, "more than 2000 optimizer steps");
  double first = 0.0, last = 0.0;
  for (std::size_t i = 0; i < per_epoch; ++i) {
    first += fit.step_losses[i];
    last += fit.step_losses[fit.step_losses.size() - per_epoch + i];
  }
  first /= per_epoch;
  last /= per_epoch;
  c.expect(last < 0.1 * first, "final loss " + fmt("%.4f", last) + " not below 0.1 x initial " + fmt("%.4f", first));

  const auto eval = training::evaluate(trainer.model(), pairs, trainer.plan(), trainer.schedule());
  c.expect(eval.report.f1 >= 0.90, "training-set F1 " + fmt("%.4f", eval.report.f1));
  c.note(std::to_string(fit.step_losses.size()) + " steps; epoch loss " + fmt("%.4f", first) + " -> " +
         fmt("%.4f", last) + "; train F1 " + fmt("%.4f", eval.report.f1) + ", IoU " + fmt("%.4f", eval.report.iou));
  trainer.save(ctx.workdir / "overfit.ckpt");
}

// --- 8. determinism ------------------------------------------------------

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Checks& c, const Context& ctx) {
  training::RunConfig cfg;
  cfg.n_layers = 4;
  cfg.T = 100;
  cfg.epochs = 2;
  cfg.synthetic.n_pairs = 16;
  cfg.synthetic.size = 32;
  const auto pairs = data::generate_synthetic(cfg.synthetic);
  training::Trainer trainer(cfg);
  trainer.fit(pairs, {});
  const auto ckpt = ctx.workdir / "det.ckpt";
  trainer.save(ckpt);

  std::string reports[2];
  for (auto& r : reports) {
    auto loaded = training::load_model(ckpt);
    const auto sched = diffusion::make_schedule(cfg.T);
    r = training::evaluate(loaded.model, pairs, diffusion::make_plan(cfg.T, cfg.n_sub_steps), sched).to_json();
  }
  c.expect(!reports[0].empty() && reports[0] == reports[1], "repeated evaluations differ");

  auto loaded = training::load_model(ckpt);
  auto& live = trainer.model();
  live->eval();
  torch::NoGradGuard ng;
  auto gen = at::make_generator<at::CPUGeneratorImpl>(8);
  auto t1 = torch::rand({2, 3, 32, 32}, gen);
  auto t2 = torch::rand({2, 3, 32, 32}, gen);
  auto x = torch::randn({2, 1, 32, 32}, gen);
  auto t = torch::tensor({1, 99}, torch::kInt64);
  c.expect(torch::equal(live->denoise(t1, t2, x, t, live->condition(t1, t2)),
                        loaded.model->denoise(t1, t2, x, t, loaded.model->condition(t1, t2))),
           "forward differs after checkpoint round-trip");

  if (!ctx.tool.empty()) {
    data::save_dataset(ctx.workdir / "data", pairs);
    for (int i = 0; i < 2; ++i) {
      const auto cmd = ctx.tool + " eval --checkpoint " + ckpt.string() + " --data " + (ctx.workdir / "data").string() +
                       " --out " + (ctx.workdir / ("report" + std::to_string(i) + ".json")).string() + " > /dev/null";
      c.expect(std::system(cmd.c_str()) == 0, "cli eval failed");
    }
    const auto a = read_file(ctx.workdir / "report0.json");
    c.expect(!a.empty() && a == read_file(ctx.workdir / "report1.json"), "cli reports differ byte-wise");
    c.note("cli eval reports byte-identical (" + std::to_string(a.size()) + " bytes)");
  }
}

// --- 9. ablation harness --------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

void ablation_smoke(Checks& c, const Context& ctx) {
  if (ctx.tool.empty()) {
    c.expect(false, "needs --tool path to the smdnet executable");
    return;
  }
  const auto cfg_path = ctx.workdir / "ablate.yaml";
  std::ofstream(cfg_path) << "n_layers: 4\nepochs: 10\nmax_steps: 40\nbatch_size: 8\nn_sub_steps: 10\n"
                             "synthetic: {n_pairs: 24, size: 32, seed: 9}\n";
  const auto out = ctx.workdir / "steps.csv";
  const auto cmd = ctx.tool + " ablate --axis steps --config " + cfg_path.string() + " --out " + out.string() +
                   " > " + (ctx.workdir / "ablate.log").string() + " 2>&1";
  c.expect(std::system(cmd.c_str()) == 0, "ablate command failed; see " + (ctx.workdir / "ablate.log").string());

  std::ifstream in(out);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  if (std::getline(in, line)) header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split_csv_line(line));
  }
  c.expect(rows.size() == 3, "expected 3 rows, got " + std::to_string(rows.size()));
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  const std::size_t t_col = col("T");
  const std::size_t sub_col = col("sub_steps");
  const std::size_t f1_col = col("f1");
  c.expect(t_col < header.size() && sub_col < header.size() && f1_col < header.size(), "missing columns");
  if (!c.ok()) return;
  const std::int64_t expected_T[] = {500, 750, 1000};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.expect(rows[i].size() == header.size(), "row " + std::to_string(i) + " has wrong arity");
    if (rows[i].size() != header.size()) continue;
    c.expect(std::stoll(rows[i][t_col]) == expected_T[i], "row " + std::to_string(i) + " T=" + rows[i][t_col]);
    std::ostringstream want;
    const auto plan = diffusion::make_plan(expected_T[i], 10);
    for (std::size_t k = 0; k < plan.sub_steps.size(); ++k) want << (k ? " " : "") << plan.sub_steps[k];
    c.expect(rows[i][sub_col] == want.str(), "row " + std::to_string(i) + " sub_steps '" + rows[i][sub_col] + "'");
    const double f1 = std::stod(rows[i][f1_col]);
    c.expect(f1 >= 0.0 && f1 <= 1.0, "row " + std::to_string(i) + " F1 out of range");
  }
  const auto md = read_file(fs::path(out).replace_extension(".md"));
  const auto trend = md.find("trend:");
  c.expect(trend != std::string::npos, "markdown table lacks the trend note");
  if (trend != std::string::npos) c.note(md.substr(trend, md.find('\n', trend) - trend));
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Checks&, const Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "diffusion numerics suite", diffusion_numerics},
      {2, "q_sample marginal statistics", marginal_statistics},
      {3, "DDIM(eta=1) / ancestral sampler equivalence", sampler_equivalence},
      {4, "metric oracle suite", metric_oracles},
      {5, "architecture invariants", architecture_invariants},
      {6, "gradient completeness", gradient_completeness},
      {7, "desk-scale overfit", desk_scale_overfit},
      {8, "determinism", determinism},
      {9, "ablation harness smoke test", ablation_smoke},
  };

  std::set<int> selected;
  Context ctx;
  ctx.workdir = fs::temp_directory_path() / "smdnet_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.insert(std::atoi(argv[++i]));
    } else if (arg == "--tool" && i + 1 < argc) {
      ctx.tool = argv[++i];
    } else if (arg == "--workdir" && i + 1 < argc) {
      ctx.workdir = argv[++i];
    } else {
      std::cerr << "usage: smdnet_acceptance [--criterion N]... [--tool PATH] [--workdir DIR]\n";
      return 2;
    }
  }
  fs::create_directories(ctx.workdir);

  int failed = 0;
  for (const auto& crit : all) {
    if (!selected.empty() && !selected.contains(crit.id)) continue;
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      crit.run(checks, ctx);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  criterion %d: %s  (%.1f s)\n", checks.ok() ? "PASS" : "FAIL", crit.id, crit.name, secs);
    for (const auto& n : checks.notes()) std::printf("      %s\n", n.c_str());
    for (const auto& f : checks.failures()) std::printf("      ! %s\n", f.c_str());
    std::fflush(stdout);
    if (!checks.ok()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
