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
#include "smdnet/errors.hpp"
#include "smdnet/objectives/losses.hpp"
#include "smdnet/objectives/metrics.hpp"
#include "smdnet/random.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace smdnet::objectives {
namespace {

TEST(DiceTest, PerfectOverlap) {
  auto gt = torch::zeros({1, 1, 10, 10});
  gt.slice(2, 0, 5).fill_(1.0);  // 50 ones
  EXPECT_LE(dice_loss(gt, gt).item<double>(), 1.0 / 101.0 + 1e-9);
}

TEST(DiceTest, DisjointHundredEach) {
  auto pred = torch::zeros({1, 1, 20, 10});
  auto gt = torch::zeros({1, 1, 20, 10});
  pred.slice(2, 0, 10).fill_(1.0);
  gt.slice(2, 10, 20).fill_(1.0);
  EXPECT_NEAR(dice_loss(pred, gt).item<double>(), 1.0 - 1.0 / 201.0, 1e-7);
}

TEST(DiceTest, EmptyMasksAreZero) {
  auto z = torch::zeros({2, 1, 4, 4});
  EXPECT_EQ(dice_loss(z, z).item<double>(), 0.0);
}

TEST(BceTest, Examples) {
  auto gt = torch::tensor({1.0F, 0.0F, 1.0F});
  // a perfect prediction costs only the clamp, as rounded in float32
  const double floor = -std::log(static_cast<double>(static_cast<float>(1.0 - kBceClamp)));
  EXPECT_NEAR(bce_loss(gt, gt).item<double>(), floor, 1e-12);
  EXPECT_LT(floor, 2e-7);
  EXPECT_NEAR(bce_loss(torch::full({3}, 0.5F), gt).item<double>(), std::log(2.0), 1e-6);
  EXPECT_NEAR(bce_loss(torch::tensor({0.9F}), torch::tensor({1.0F})).item<double>(), -std::log(0.9), 1e-6);
  // clamping keeps hard mistakes finite
  EXPECT_TRUE(std::isfinite(bce_loss(torch::tensor({0.0F}), torch::tensor({1.0F})).item<double>()));
}

TEST(TotalLossTest, PerfectAndComponents) {
  auto gt = torch::zeros({1, 1, 8, 8});
  gt.slice(3, 0, 4).fill_(1.0);
  // x0hat exactly +-1 maps to {0, 1}
  EXPECT_LT(total_loss(gt * 2 - 1, gt).item<double>(), 1.0 / 65.0 + 1e-6);
  auto x0hat = torch::rand({1, 1, 8, 8}) * 2 - 1;
  const double total = total_loss(x0hat, gt).item<double>();
  const auto p = (x0hat + 1) / 2;
  EXPECT_GE(total, dice_loss(p, gt).item<double>());
  EXPECT_GE(total, bce_loss(p, gt).item<double>());
}

TEST(TotalLossTest, HalfPredictionLimit) {
  const std::int64_t n = 1 << 20;
  auto gt = torch::zeros({1, 1, 1, n});
  gt.slice(3, 0, n / 2).fill_(1.0);
  // dice = 1 - (0.5n + 1) / (n + 1), bce = ln 2
  const double expected = (1.0 - (0.5 * n + 1.0) / (n + 1.0)) + std::log(2.0);
  const double got = total_loss(torch::zeros({1, 1, 1, n}), gt).item<double>();
  EXPECT_NEAR(got, expected, 1e-5);
  EXPECT_NEAR(got, 1.19315, 1e-4);
}

TEST(LossTest, ShapeMismatch) {
  EXPECT_THROW(dice_loss(torch::zeros({1, 1, 2, 2}), torch::zeros({1, 1, 2, 3})), ShapeError);
  EXPECT_THROW(bce_loss(torch::zeros({4}), torch::zeros({5})), ShapeError);
}

TEST(ConfusionTest, Examples) {
  const auto ones = torch::ones({10});
  EXPECT_EQ(confusion(ones, ones), (ConfusionCounts{10, 0, 0, 0}));
  const auto gt = torch::tensor({1.0F, 0.0F, 0.0F, 1.0F});
  const auto flipped = confusion(1 - gt, gt);
  EXPECT_EQ(flipped.tp, 0);
  EXPECT_EQ(flipped.tn, 0);
  EXPECT_EQ(confusion(torch::tensor({1.0F, 1.0F, 0.0F, 0.0F}), gt), (ConfusionCounts{1, 1, 1, 1}));
}

TEST(ConfusionTest, AdditiveOverTiles) {
  auto pred = torch::rand({4, 1, 8, 8}).gt(0.5).to(torch::kFloat32);
  auto gt = torch::rand({4, 1, 8, 8}).gt(0.5).to(torch::kFloat32);
  ConfusionCounts sum;
  for (int i = 0; i < 4; ++i) sum += confusion(pred[i], gt[i]);
  EXPECT_EQ(sum, confusion(pred, gt));
  EXPECT_EQ(sum.total(), 256);
}

TEST(ConfusionTest, NonBinaryRejected) {
  EXPECT_THROW(confusion(torch::tensor({0.5F}), torch::tensor({1.0F})), DataError);
  EXPECT_THROW(confusion(torch::tensor({1.0F}), torch::tensor({2.0F})), DataError);
  EXPECT_THROW(confusion(torch::zeros({3}), torch::zeros({4})), ShapeError);
}

TEST(MetricsTest, HandExample) {
  const auto m = compute_metrics({3, 1, 2, 4});
  EXPECT_NEAR(m.precision, 0.75, 1e-12);
  EXPECT_NEAR(m.recall, 0.6, 1e-12);
  EXPECT_NEAR(m.f1, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.iou, 0.5, 1e-12);
  EXPECT_NEAR(m.oa, 0.7, 1e-12);
  EXPECT_FALSE(m.is_degenerate());
}

TEST(MetricsTest, ReferenceBaselineRow) {
  // counts with P = 8691/10000 and R = 8017/10000 exactly
  const ConfusionCounts c{8691LL * 8017, 8017LL * 1309, 8691LL * 1983, 0};
  const auto m = compute_metrics(c);
  EXPECT_NEAR(m.precision, 0.8691, 1e-12);
  EXPECT_NEAR(m.recall, 0.8017, 1e-12);
  EXPECT_NEAR(m.f1 * 100, 83.40, 0.01);
  EXPECT_NEAR(m.iou * 100, 71.53, 0.01);
}

TEST(MetricsTest, DegenerateFlagged) {
  const auto m = compute_metrics({0, 0, 0, 16});
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_EQ(m.oa, 1.0);
  EXPECT_TRUE(m.is_degenerate());
  EXPECT_NE(std::find(m.degenerate.begin(), m.degenerate.end(), "precision"), m.degenerate.end());
  const auto empty = compute_metrics({});
  EXPECT_EQ(empty.oa, 0.0);
}

TEST(MetricsTest, IdentityAndRangeOnRandomTables) {
  PortableRng rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const ConfusionCounts c{rng.uniform_int(1, 100000), rng.uniform_int(0, 100000), rng.uniform_int(0, 100000),
                            rng.uniform_int(0, 100000)};
    const auto m = compute_metrics(c);
    const auto hand = oracle::hand_metrics(c.tp, c.fp, c.fn, c.tn);
    ASSERT_NEAR(m.iou, m.f1 / (2.0 - m.f1), 1e-9);
    ASSERT_NEAR(m.f1, hand.f1, 1e-12);
    ASSERT_NEAR(m.oa, hand.oa, 1e-12);
    for (double v : {m.precision, m.recall, m.f1, m.iou, m.oa}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(MetricsTest, PerfectAgreementGivesUnitOa) {
  auto gt = torch::rand({64}).gt(0.5).to(torch::kFloat32);
  EXPECT_EQ(compute_metrics(confusion(gt, gt)).oa, 1.0);
  auto other = gt.clone();
  other[0] = 1 - other[0];
  EXPECT_LT(compute_metrics(confusion(other, gt)).oa, 1.0);
}

TEST(MetricsTest, JsonRoundTrip) {
  const auto m = compute_metrics({3, 1, 2, 4});
  const auto text = to_json(m);
  EXPECT_NE(text.find("\"tp\": 3"), std::string::npos);
  EXPECT_EQ(metrics_from_json(text), m);
  const auto d = compute_metrics({0, 0, 0, 1});
  EXPECT_EQ(metrics_from_json(to_json(d)), d);
}

}  // namespace
}  // namespace smdnet::objectives
