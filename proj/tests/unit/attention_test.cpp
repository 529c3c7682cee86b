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
#include "smdnet/encoder/attention.hpp"
#include "smdnet/encoder/siamese.hpp"
#include "smdnet/errors.hpp"

#include <gtest/gtest.h>

namespace smdnet::encoder {
namespace {

const AttentionKind kAllKinds[] = {AttentionKind::kSA, AttentionKind::kECA, AttentionKind::kNL, AttentionKind::kAX,
                                   AttentionKind::kNone};

TEST(AttentionTest, ParseKinds) {
  EXPECT_EQ(parse_attention_kind("SA"), AttentionKind::kSA);
  EXPECT_EQ(parse_attention_kind("eca"), AttentionKind::kECA);
  EXPECT_EQ(parse_attention_kind("Nl"), AttentionKind::kNL);
  EXPECT_EQ(parse_attention_kind("AX"), AttentionKind::kAX);
  EXPECT_EQ(parse_attention_kind("none"), AttentionKind::kNone);
  EXPECT_THROW(parse_attention_kind("cbam"), ConfigError);
  for (auto k : kAllKinds) EXPECT_EQ(parse_attention_kind(to_string(k)), k);
}

TEST(AttentionTest, EveryKindPreservesShape) {
  torch::NoGradGuard ng;
  for (auto kind : kAllKinds) {
    for (auto shape : {std::vector<std::int64_t>{2, 8, 16, 16}, {1, 3, 5, 11}, {1, 1, 1, 1}, {1, 16, 40, 40}}) {
      AttentionGate gate(kind, shape[1]);
      const auto x = torch::randn(shape);
      EXPECT_EQ(gate->forward(x).sizes(), x.sizes()) << to_string(kind);
    }
  }
}

TEST(AttentionTest, NoneIsBitwiseIdentity) {
  AttentionGate gate(AttentionKind::kNone, 4);
  const auto x = torch::randn({2, 4, 6, 6});
  EXPECT_TRUE(torch::equal(gate->forward(x), x));
  EXPECT_EQ(parameter_count(*gate), 0);
}

TEST(SpatialAttentionTest, ZeroInputGivesConstantGateAndZeroOutput) {
  torch::NoGradGuard ng;
  SpatialAttention sa;
  const auto x = torch::zeros({1, 5, 9, 9});
  const auto g = sa->gate(x);
  const auto bias = sa->named_parameters()["conv.bias"].item<float>();
  EXPECT_TRUE(torch::allclose(g, torch::full_like(g, 1.0F / (1.0F + std::exp(-bias)))));
  EXPECT_EQ(sa->forward(x).abs().max().item<float>(), 0.0F);
}

TEST(SpatialAttentionTest, GateStrictlyInsideUnitIntervalAndContracts) {
  torch::NoGradGuard ng;
  SpatialAttention sa;
  const auto x = torch::randn({2, 6, 12, 12});
  const auto g = sa->gate(x);
  EXPECT_EQ(g.sizes(), (std::vector<std::int64_t>{2, 1, 12, 12}));
  EXPECT_GT(g.min().item<float>(), 0.0F);
  EXPECT_LT(g.max().item<float>(), 1.0F);
  EXPECT_TRUE((sa->forward(x).abs() <= x.abs()).all().item<bool>());
}

TEST(ChannelAttentionTest, ParametersIndependentOfSpatialSize) {
  ChannelAttention eca(64);
  const auto before = parameter_count(*eca);
  torch::NoGradGuard ng;
  eca->forward(torch::randn({1, 64, 4, 4}));
  eca->forward(torch::randn({1, 64, 33, 17}));
  EXPECT_EQ(parameter_count(*eca), before);
  EXPECT_EQ(parameter_count(*AttentionGate(AttentionKind::kECA, 64)), before);
  EXPECT_EQ(ChannelAttentionImpl::kernel_size_for(64), 3);
  EXPECT_EQ(ChannelAttentionImpl::kernel_size_for(256), 5);
  EXPECT_EQ(ChannelAttentionImpl::kernel_size_for(1) % 2, 1);
}

TEST(NonLocalTest, SkipsLargeMaps) {
  torch::NoGradGuard ng;
  NonLocal nl(4);
  const auto big = torch::randn({1, 4, 33, 8});
  EXPECT_TRUE(torch::equal(nl->forward(big), big));
  const auto small = torch::randn({1, 4, 8, 8});
  EXPECT_FALSE(torch::equal(nl->forward(small), small));
}

TEST(AxialAttentionTest, MixesAlongBothAxes) {
  torch::NoGradGuard ng;
  AxialAttention ax(4);
  auto x = torch::zeros({1, 4, 6, 6});
  const auto base = ax->forward(x);
  x.index_put_({0, torch::indexing::Slice(), 0, 0}, 3.0);
  const auto moved = (ax->forward(x) - base).abs().sum(1)[0];
  // a perturbation at (0, 0) reaches the far corner only through both passes
  EXPECT_GT(moved[5][5].item<float>(), 0.0F);
}

}  // namespace
}  // namespace smdnet::encoder
