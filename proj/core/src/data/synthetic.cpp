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

#include "smdnet/errors.hpp"
#include "smdnet/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace smdnet::data {

namespace {

using Rgb = std::array<float, 3>;

// Planar RGB raster, row-major per channel.
struct Raster {
  std::int64_t size;
  std::vector<float> px;

  explicit Raster(std::int64_t s) : size(s), px(static_cast<std::size_t>(3 * s * s), 0.0F) {}

  float& at(int c, std::int64_t y, std::int64_t x) {
    return px[static_cast<std::size_t>((c * size + y) * size + x)];
  }
  void set(std::int64_t y, std::int64_t x, const Rgb& rgb) {
    for (int c = 0; c < 3; ++c) at(c, y, x) = rgb[static_cast<std::size_t>(c)];
  }
};

struct Shape {
  bool ellipse = false;
  std::int64_t y0 = 0, x0 = 0, h = 1, w = 1;
  Rgb color{};

  bool contains(std::int64_t y, std::int64_t x) const {
    if (y < y0 || y >= y0 + h || x < x0 || x >= x0 + w) return false;
    if (!ellipse) return true;
    const double cy = static_cast<double>(y0) + (static_cast<double>(h) - 1.0) / 2.0;
    const double cx = static_cast<double>(x0) + (static_cast<double>(w) - 1.0) / 2.0;
    const double ry = std::max(static_cast<double>(h) / 2.0, 0.5);
    const double rx = std::max(static_cast<double>(w) / 2.0, 0.5);
    const double dy = (static_cast<double>(y) - cy) / ry;
    const double dx = (static_cast<double>(x) - cx) / rx;
    return dy * dy + dx * dx <= 1.0;
  }
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Object colors sit well away from the background range [0.25, 0.6] so
// structural change is always visible against the terrain.
Rgb object_color(PortableRng& rng) {
  Rgb c{};
  const bool bright = rng.bernoulli(0.5);
  for (auto& v : c) {
    v = static_cast<float>(bright ? rng.uniform(0.75, 0.95) : rng.uniform(0.0, 0.15));
  }
  // one channel flipped gives saturated hues rather than only greys
  const auto flip = static_cast<std::size_t>(rng.uniform_int(0, 2));
  c[flip] = static_cast<float>(bright ? rng.uniform(0.0, 0.3) : rng.uniform(0.6, 0.9));
  return c;
}

Shape random_shape(PortableRng& rng, std::int64_t size, std::int64_t max_area) {
  Shape s;
  s.ellipse = rng.bernoulli(0.5);
  const std::int64_t min_side = 3;
  const auto side_cap = std::max<std::int64_t>(
      min_side, std::min<std::int64_t>(size / 2, static_cast<std::int64_t>(std::sqrt(static_cast<double>(max_area)) * 1.5)));
  s.w = rng.uniform_int(min_side, side_cap);
  s.h = std::clamp<std::int64_t>(max_area / s.w, min_side, size / 2);
  s.h = rng.uniform_int(std::max<std::int64_t>(min_side, s.h / 2), std::max<std::int64_t>(min_side, s.h));
  s.y0 = rng.uniform_int(0, size - s.h);
  s.x0 = rng.uniform_int(0, size - s.w);
  s.color = object_color(rng);
  return s;
}

void paint(Raster& r, const Shape& s, std::vector<std::uint8_t>* mask) {
  for (std::int64_t y = s.y0; y < s.y0 + s.h; ++y) {
    for (std::int64_t x = s.x0; x < s.x0 + s.w; ++x) {
      if (!s.contains(y, x)) continue;
      r.set(y, x, s.color);
      if (mask != nullptr) (*mask)[static_cast<std::size_t>(y * r.size + x)] = 1;
    }
  }
}

void textured_background(Raster& r, PortableRng& rng) {
  Rgb base{};
  for (auto& v : base) v = static_cast<float>(rng.uniform(0.3, 0.55));
  struct Wave {
    double fy, fx, phase, amp;
  };
  std::array<Wave, 3> waves{};
  for (auto& wv : waves) {
    wv = {rng.uniform(0.02, 0.2), rng.uniform(0.02, 0.2), rng.uniform(0.0, 2.0 * std::numbers::pi),
          rng.uniform(0.01, 0.04)};
  }
  for (std::int64_t y = 0; y < r.size; ++y) {
    for (std::int64_t x = 0; x < r.size; ++x) {
      double tex = 0.0;
      for (const auto& wv : waves) {
        tex += wv.amp * std::sin(wv.fy * static_cast<double>(y) + wv.fx * static_cast<double>(x) + wv.phase);
      }
      const double grain = rng.uniform(-0.02, 0.02);
      for (int c = 0; c < 3; ++c) {
        r.at(c, y, x) = static_cast<float>(base[static_cast<std::size_t>(c)] + tex + grain);
      }
    }
  }
}

// Global gain/offset plus a hue rotation about the grey axis.
void photometric_shift(Raster& r, double amplitude, PortableRng& rng) {
  const double gain = 1.0 + amplitude * rng.uniform(-1.0, 1.0);
  const double offset = 0.5 * amplitude * rng.uniform(-1.0, 1.0);
  const double theta = amplitude * rng.uniform(-1.0, 1.0) * std::numbers::pi / 6.0;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const double k = (1.0 - cs) / 3.0;
  const double q = std::sqrt(1.0 / 3.0) * sn;
  const std::array<std::array<double, 3>, 3> rot{{
      {cs + k, k - q, k + q},
      {k + q, cs + k, k - q},
      {k - q, k + q, cs + k},
  }};
  for (std::int64_t y = 0; y < r.size; ++y) {
    for (std::int64_t x = 0; x < r.size; ++x) {
      const std::array<double, 3> in{r.at(0, y, x), r.at(1, y, x), r.at(2, y, x)};
      for (int c = 0; c < 3; ++c) {
        const auto& row = rot[static_cast<std::size_t>(c)];
        const double v = gain * (row[0] * in[0] + row[1] * in[1] + row[2] * in[2]) + offset;
        r.at(c, y, x) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
}

void clamp_unit(Raster& r) {
  for (auto& v : r.px) v = std::clamp(v, 0.0F, 1.0F);
}

torch::Tensor to_tensor(const std::vector<float>& data, std::int64_t channels, std::int64_t size) {
  return torch::from_blob(const_cast<float*>(data.data()), {channels, size, size}, torch::kFloat32).clone();
}

}  // namespace

void SyntheticConfig::validate() const {
  if (n_pairs < 0) throw ConfigError("synthetic: n_pairs must be >= 0");
  if (size < 16) throw ConfigError("synthetic: size must be >= 16");
  if (change_fraction < 0.0 || change_fraction > 1.0) {
    throw ConfigError("synthetic: change_fraction must lie in [0, 1]");
  }
  if (photometric_jitter < 0.0) throw ConfigError("synthetic: photometric_jitter must be >= 0");
}

std::vector<BiTemporalPair> generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  const std::int64_t n = cfg.size;
  const auto n_px = static_cast<std::size_t>(n * n);
  std::vector<BiTemporalPair> pairs;
  pairs.reserve(static_cast<std::size_t>(cfg.n_pairs));

  for (std::int64_t i = 0; i < cfg.n_pairs; ++i) {
    PortableRng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    Raster t1(n);
    textured_background(t1, rng);

    const auto n_static = rng.uniform_int(2, 5);
    for (std::int64_t s = 0; s < n_static; ++s) {
      paint(t1, random_shape(rng, n, static_cast<std::int64_t>(n_px) / 16), nullptr);
    }
    Raster t2 = t1;

    std::vector<std::uint8_t> mask(n_px, 0);
    const auto target = static_cast<std::int64_t>(std::llround(cfg.change_fraction * static_cast<double>(n_px)));
    std::int64_t covered = 0;
    for (int attempt = 0; covered < target && attempt < 10000; ++attempt) {
      const std::int64_t remaining = target - covered;
      const auto cap = std::max<std::int64_t>(9, std::min<std::int64_t>(remaining, static_cast<std::int64_t>(n_px) / 10));
      const Shape s = random_shape(rng, n, cap);
      // added objects appear only in t2, removed ones only in t1
      paint(rng.bernoulli(0.5) ? t2 : t1, s, &mask);
      covered = std::count(mask.begin(), mask.end(), std::uint8_t{1});
    }
    clamp_unit(t1);
    clamp_unit(t2);
    if (cfg.photometric_jitter > 0.0) photometric_shift(t2, cfg.photometric_jitter, rng);

    std::vector<float> mask_f(mask.begin(), mask.end());
    pairs.emplace_back("syn_" + std::to_string(i), to_tensor(t1.px, 3, n), to_tensor(t2.px, 3, n),
                       to_tensor(mask_f, 1, n));
  }
  return pairs;
}

}  // namespace smdnet::data
