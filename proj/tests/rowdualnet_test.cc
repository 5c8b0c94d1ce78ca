// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualseed/rowdualnet.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "dualseed/datagen.hpp"
#include "dualseed/gradcheck.hpp"
#include "dualseed/min_trick.hpp"

namespace dualseed {
namespace {

ModelConfig TinyConfig(int k = 3, RefinePooling pooling = RefinePooling::kSortedValues) {
  ModelConfig cfg;
  cfg.hidden_dim = 8;
  cfg.refine_k = k;
  cfg.pooling = pooling;
  return cfg;
}

LabeledInstance TinyInstance(std::uint64_t seed, std::size_t n = 6) {
  return GenLabels(GenDense(n, seed));
}

TEST(ForwardTest, ZeroWeightsGiveHeadBias) {
  auto p = ModelParams::Zeros(ModelConfig{});
  p.b_out(0) = 0.37;
  for (auto& b : p.blocks) b.ln_gain.setOnes();
  auto inst = TinyInstance(1, 9);
  auto u = Forward(p, inst.features, inst.c);
  ASSERT_EQ(u.size(), 9u);
  for (double x : u) EXPECT_EQ(x, 0.37);
}

TEST(ForwardTest, ShapeContract) {
  auto p = ModelParams::Init(TinyConfig(16), 3);
  auto c = GenDense(5, 2);
  auto f = ExtractFeatures(c, PipelineConfig{});
  auto u = Forward(p, f, c);
  ASSERT_EQ(u.size(), 5u);
  for (double x : u) EXPECT_TRUE(std::isfinite(x));
  PipelineConfig small;
  small.feature_dim = 13;
  EXPECT_THROW(Forward(p, ExtractFeatures(c, small), c), Error);
}

TEST(ForwardTest, PaddedTopKMatchesFoldedWeights) {
  auto c = GenDense(4, 3);
  auto f = ExtractFeatures(c, PipelineConfig{});
  auto padded = ModelParams::Init(TinyConfig(16), 5);
  // Padding repeats the 4th value, so a K = 4 model whose last refine
  // column is the sum of columns 3..15 computes the same function.
  ModelConfig cfg4 = TinyConfig(4);
  ModelParams exact = padded;
  exact.config = cfg4;
  exact.w_ref = padded.w_ref.leftCols(4);
  exact.w_ref.col(3) = padded.w_ref.rightCols(13).rowwise().sum();
  auto u16 = Forward(padded, f, c);
  auto u4 = Forward(exact, f, c);
  auto topk = TopKCosts(c, 16);
  for (int r = 4; r < 16; ++r) EXPECT_EQ(topk.row(r), topk.row(3));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(std::isfinite(u16[i]));
    EXPECT_NEAR(u16[i], u4[i], 1e-12);
  }
}

TEST(ForwardTest, TopKCostsAreSortedRowMinima) {
  auto c = CostMatrix::FromRows({{5, 1, 3}, {2, 2, 0}, {9, 8, 7}});
  auto t = TopKCosts(c, 2);
  EXPECT_EQ(t(0, 0), 1);
  EXPECT_EQ(t(1, 0), 3);
  EXPECT_EQ(t(0, 1), 0);
  EXPECT_EQ(t(1, 1), 2);
  EXPECT_EQ(t(0, 2), 7);
  EXPECT_EQ(t(1, 2), 8);
}

TEST(ForwardTest, RowPermutationEquivariance) {
  auto p = ModelParams::Init(ModelConfig{}, 7);
  auto c = GenDense(23, 4);
  auto f = ExtractFeatures(c, PipelineConfig{});
  std::vector<std::size_t> perm(23);
  std::iota(perm.begin(), perm.end(), 0);
  CounterRng rng(9);
  rng.Shuffle(std::span<std::size_t>(perm));
  std::vector<double> cv(23 * 23);
  FeatureMatrix fp(23, f.d);
  for (std::size_t i = 0; i < 23; ++i) {
    for (std::size_t j = 0; j < 23; ++j) cv[i * 23 + j] = c(perm[i], j);
    for (std::size_t k = 0; k < f.d; ++k) fp.at(i, k) = f.at(perm[i], k);
  }
  CostMatrix cp(23, std::move(cv));
  auto u = Forward(p, f, c);
  auto up = Forward(p, fp, cp);
  for (std::size_t i = 0; i < 23; ++i) EXPECT_EQ(up[i], u[perm[i]]);
}

TEST(ForwardTest, GaugeShiftKeepsEqualitySubgraph) {
  auto p = ModelParams::Init(ModelConfig{}, 8);
  auto c = GenDense(30, 5);
  auto u = Forward(p, ExtractFeatures(c, PipelineConfig{}), c);
  auto edges = [&c](const std::vector<double>& uu) {
    auto mt = MinTrick(c, uu);
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (std::abs(ReducedCost(c, mt.duals.u, mt.duals.v, i, j)) < 1e-9) out.insert({i, j});
      }
    }
    return out;
  };
  auto shifted = u;
  for (auto& x : shifted) x += 0.731;
  EXPECT_EQ(edges(u), edges(shifted));
}

TEST(LossTest, ZeroAtLabels) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = TinyInstance(seed, 20);
    auto l = Loss(inst.u_star, inst, 0.1);
    EXPECT_EQ(l.mae, 0.0);
    EXPECT_EQ(l.slackness, 0.0);
    EXPECT_EQ(l.value, 0.0);
  }
}

TEST(LossTest, GaugeShift) {
  auto inst = TinyInstance(3, 20);
  auto u = inst.u_star;
  for (auto& x : u) x += 0.25;
  auto l = Loss(u, inst, 0.1);
  EXPECT_NEAR(l.mae, 0.25, 1e-12);
  EXPECT_NEAR(l.slackness, 0.0, 1e-12);
}

TEST(LossTest, ZeroLambdaIsMae) {
  auto inst = TinyInstance(4, 12);
  CounterRng rng(1);
  std::vector<double> u(12);
  for (auto& x : u) x = rng.Uniform(-1, 1);
  auto l = Loss(u, inst, 0.0);
  double mae = 0;
  for (std::size_t i = 0; i < 12; ++i) mae += std::abs(u[i] - inst.u_star[i]);
  EXPECT_NEAR(l.value, mae / 12, 1e-15);
  EXPECT_EQ(l.value, l.mae);
}

// The slackness sum equals OPT minus the min-trick dual objective.
TEST(LossTest, SlacknessIsDualityGap) {
  CounterRng rng(2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = TinyInstance(seed, 15);
    std::vector<double> u(15);
    for (auto& x : u) x = rng.Uniform(-0.5, 0.5);
    auto l = Loss(u, inst, 1.0);
    auto mt = MinTrick(inst.c, u);
    const double opt = AssignmentCost(inst.c, inst.optimal_cols);
    EXPECT_NEAR(l.slackness, opt - mt.duals.objective(), 1e-12);
    EXPECT_GE(l.value, 0.0);
    EXPECT_GT(l.value, 0.0);
  }
}

TEST(LossTest, SlacknessFlatAlongGauge) {
  auto inst = TinyInstance(6, 18);
  CounterRng rng(3);
  std::vector<double> u(18);
  for (auto& x : u) x = rng.Uniform(-0.5, 0.5);
  auto l = Loss(u, inst, 1.0);
  // Analytic: the slackness part of the gradient sums to zero.
  auto mae_only = Loss(u, inst, 0.0);
  double dir = 0;
  for (std::size_t i = 0; i < 18; ++i) dir += l.grad_u[i] - mae_only.grad_u[i];
  EXPECT_NEAR(dir, 0.0, 1e-12);
  // Directional finite difference.
  const double h = 1e-5;
  auto up = u, down = u;
  for (auto& x : up) x += h;
  for (auto& x : down) x -= h;
  const double fd = (Loss(up, inst, 1.0).slackness - Loss(down, inst, 1.0).slackness) / (2 * h);
  EXPECT_NEAR(fd, 0.0, 1e-8);
}

TEST(BackwardTest, HeadBiasGradientOfConstantNetwork) {
  auto inst = TinyInstance(7, 10);
  auto p = ModelParams::Zeros(TinyConfig());
  p.b_out(0) = 0.01;
  auto g = ComputeGradient(p, inst, 0.0);
  double expect = 0;
  for (double u : inst.u_star) expect += (0.01 > u ? 1.0 : 0.01 < u ? -1.0 : 0.0) / 10.0;
  EXPECT_NEAR(g.grad.b_out(0), expect, 1e-15);
}

TEST(BackwardTest, FiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto inst = TinyInstance(100 + seed);
    auto p = ModelParams::Init(TinyConfig(), seed);
    // Random biases and LayerNorm affine so no parameter sits at a
    // symmetric point.
    CounterRng rng(seed, 77);
    for (auto& t : p.Tensors()) {
      if (t.name.find("bias") != std::string::npos || t.name.find("gain") != std::string::npos) {
        for (double& x : t.span()) x += 0.3 * rng.Normal();
      }
    }
    auto r = CheckGradient(p, inst, 0.5);
    EXPECT_LE(r.max_rel_error, 1e-4) << "seed " << seed;
    EXPECT_GT(r.checked, static_cast<int>(p.NumParameters()) * 9 / 10);
  }
}

TEST(BackwardTest, FiniteDifferencesPoolingVariants) {
  for (auto pooling : {RefinePooling::kMean, RefinePooling::kMax}) {
    auto inst = TinyInstance(200);
    auto p = ModelParams::Init(TinyConfig(3, pooling), 4);
    for (auto& t : p.Tensors()) {
      if (t.name.find("bias") != std::string::npos) {
        for (double& x : t.span()) x += 0.1;
      }
    }
    auto r = CheckGradient(p, inst, 0.5);
    EXPECT_LE(r.max_rel_error, 1e-4);
  }
}

TEST(BackwardTest, GradientsFinite) {
  auto inst = TinyInstance(9, 40);
  auto p = ModelParams::Init(ModelConfig{}, 1);
  auto g = ComputeGradient(p, inst, 0.1);
  EXPECT_TRUE(g.grad.AllFinite());
  EXPECT_TRUE(std::isfinite(g.loss.value));
}

}  // namespace
}  // namespace dualseed
