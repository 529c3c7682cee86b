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
#include "smdnet/data/io.hpp"

#include "smdnet/errors.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace fs = std::filesystem;

namespace smdnet::data {

namespace {

const std::set<std::string> kImageExtensions{".png", ".jpg", ".jpeg", ".tif", ".tiff", ".bmp"};

cv::Mat read_raw(const fs::path& path) {
  cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw DataError("cannot decode image: " + path.string());
  if (img.depth() != CV_8U && img.depth() != CV_16U) {
    throw DataError("unsupported bit depth in " + path.string() + " (expected 8 or 16 bit)");
  }
  return img;
}

double depth_max(const cv::Mat& img) { return img.depth() == CV_16U ? 65535.0 : 255.0; }

// HWC cv::Mat (float) -> [C, H, W] tensor
torch::Tensor mat_to_chw(const cv::Mat& mat) {
  cv::Mat f = mat.isContinuous() ? mat : mat.clone();
  auto t = torch::from_blob(f.data, {f.rows, f.cols, f.channels()}, torch::kFloat32).clone();
  return t.permute({2, 0, 1}).contiguous();
}

std::map<std::string, fs::path> list_images(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  if (!fs::is_directory(dir)) throw DataError("missing dataset directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (kImageExtensions.contains(ext)) out.emplace(entry.path().stem().string(), entry.path());
  }
  return out;
}

}  // namespace

torch::Tensor read_rgb(const fs::path& path) {
  cv::Mat img = read_raw(path);
  const double scale = 1.0 / depth_max(img);
  cv::Mat rgb;
  switch (img.channels()) {
    case 1: cv::cvtColor(img, rgb, cv::COLOR_GRAY2RGB); break;
    case 3: cv::cvtColor(img, rgb, cv::COLOR_BGR2RGB); break;
    case 4: cv::cvtColor(img, rgb, cv::COLOR_BGRA2RGB); break;
    default: throw DataError("unsupported channel count in " + path.string());
  }
  cv::Mat f;
  rgb.convertTo(f, CV_32F, scale);
  return mat_to_chw(f);
}

torch::Tensor read_gray(const fs::path& path) {
  cv::Mat img = read_raw(path);
  const double scale = 1.0 / depth_max(img);
  cv::Mat gray;
  switch (img.channels()) {
    case 1: gray = img; break;
    case 3: cv::cvtColor(img, gray, cv::COLOR_BGR2GRAY); break;
    case 4: cv::cvtColor(img, gray, cv::COLOR_BGRA2GRAY); break;
    default: throw DataError("unsupported channel count in " + path.string());
  }
  cv::Mat f;
  gray.convertTo(f, CV_32F, scale);
  return mat_to_chw(f);
}

void write_image(const fs::path& path, const torch::Tensor& chw) {
  if (chw.dim() != 3 || (chw.size(0) != 1 && chw.size(0) != 3)) {
    throw ShapeError("write_image expects [1|3, H, W]");
  }
  auto hwc = (chw.detach().to(torch::kCPU, torch::kFloat32).clamp(0.0, 1.0) * 255.0)
                 .round()
                 .to(torch::kUInt8)
                 .permute({1, 2, 0})
                 .contiguous();
  const auto channels = static_cast<int>(hwc.size(2));
  cv::Mat mat(static_cast<int>(hwc.size(0)), static_cast<int>(hwc.size(1)), CV_8UC(channels), hwc.data_ptr<std::uint8_t>());
  cv::Mat out;
  if (channels == 3) {
    cv::cvtColor(mat, out, cv::COLOR_RGB2BGR);
  } else {
    out = mat;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), out)) throw DataError("cannot write image: " + path.string());
}

LoadedDataset load_dataset(const fs::path& root, DatasetLayout layout) {
  switch (layout) {
    case DatasetLayout::kABLabel: break;
  }
  const auto a = list_images(root / "A");
  const auto b = list_images(root / "B");
  const auto label = list_images(root / "label");

  std::set<std::string> ids;
  for (const auto* dir : {&a, &b, &label}) {
    for (const auto& [id, _] : *dir) ids.insert(id);
  }

  LoadedDataset out;
  for (const auto& id : ids) {
    std::vector<std::string> missing;
    if (!a.contains(id)) missing.emplace_back("A");
    if (!b.contains(id)) missing.emplace_back("B");
    if (!label.contains(id)) missing.emplace_back("label");
    if (!missing.empty()) {
      std::string where;
      for (const auto& m : missing) where += (where.empty() ? "" : ", ") + m + "/" + id;
      throw DataError("orphan pair '" + id + "': missing " + where);
    }

    cv::Mat raw_mask = read_raw(label.at(id));
    if (raw_mask.channels() > 1) cv::cvtColor(raw_mask, raw_mask, raw_mask.channels() == 4 ? cv::COLOR_BGRA2GRAY : cv::COLOR_BGR2GRAY);
    const double max_val = depth_max(raw_mask);
    cv::Mat not_zero = raw_mask != 0;
    cv::Mat not_max = raw_mask != max_val;
    if (cv::countNonZero(not_zero & not_max) > 0) {
      out.warnings.push_back("mask '" + id + "' holds values outside {0, " +
                             std::to_string(static_cast<int>(max_val)) + "}; binarized at 0.5");
    }
    cv::Mat mask_f;
    raw_mask.convertTo(mask_f, CV_32F, 1.0 / max_val);
    auto mask = mat_to_chw(mask_f).ge(0.5).to(torch::kFloat32);

    try {
      out.pairs.emplace_back(id, read_rgb(a.at(id)), read_rgb(b.at(id)), mask);
    } catch (const ShapeError& e) {
      throw DataError("pair '" + id + "': " + e.what());
    }
  }
  return out;
}

void save_dataset(const fs::path& root, const std::vector<BiTemporalPair>& pairs) {
  for (const auto* sub : {"A", "B", "label"}) fs::create_directories(root / sub);
  for (const auto& p : pairs) {
    write_image(root / "A" / (p.id() + ".png"), p.t1());
    write_image(root / "B" / (p.id() + ".png"), p.t2());
    write_image(root / "label" / (p.id() + ".png"), p.mask());
  }
}

}  // namespace smdnet::data
