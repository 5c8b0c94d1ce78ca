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

#include "dualseed/warmstart.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <vector>

#include "dualseed/datagen.hpp"
#include "test_util.hpp"

namespace dualseed {
namespace {

using testing::RandomIntMatrix;

void ExpectStagesPopulated(const PipelineReport& r) {
  ASSERT_EQ(r.stage_times.size(), 5u);
  for (const char* s : kStageNames) {
    ASSERT_TRUE(r.stage_times.contains(s)) << s;
    EXPECT_GE(r.stage_times.at(s), 0);
  }
}

TEST(WarmSolveTest, ZeroModelIsExact) {
  auto model = ModelParams::Zeros(ModelConfig{});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto c = GenDense(40, seed);
    PipelineConfig cfg;
    cfg.tau = 0.0;
    auto w = WarmSolve(c, model, cfg);
    EXPECT_FALSE(w.report.fallback_triggered);
    EXPECT_EQ(w.report.total_cost, SolveCold(c).assignment.total_cost);
    EXPECT_TRUE(VerifyCertificate(c, w.assignment, w.duals).ok);
    ExpectStagesPopulated(w.report);
  }
}

TEST(WarmSolveTest, InfiniteTauAlwaysFallsBack) {
  auto model = ModelParams::Init(ModelConfig{}, 1);
  PipelineConfig cfg;
  cfg.tau = std::numeric_limits<double>::infinity();
  auto c = GenDense(30, 2);
  auto w = WarmSolve(c, model, cfg);
  EXPECT_TRUE(w.report.fallback_triggered);
  auto cold = SolveCold(c);
  EXPECT_EQ(w.report.total_cost, cold.assignment.total_cost);
  EXPECT_TRUE(w.report.solve_stats.SameCounters(cold.stats));
  ExpectStagesPopulated(w.report);
}

TEST(WarmSolveTest, FeatureDimMismatch) {
  auto model = ModelParams::Init(ModelConfig{}, 1);
  PipelineConfig cfg;
  cfg.feature_dim = 13;
  EXPECT_THROW(WarmSolve(GenDense(5, 1), model, cfg), Error);
}

TEST(WarmSolveTest, IntegerMatricesBitExact) {
  CounterRng rng(21);
  auto model = ModelParams::Init(ModelConfig{}, 2);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.Below(30);
    auto c = RandomIntMatrix(n, rng, 0, 15);
    for (double tau : {0.0, 1.2}) {
      PipelineConfig cfg;
      cfg.tau = tau;
      EXPECT_EQ(WarmSolve(c, model, cfg).report.total_cost, SolveCold(c).assignment.total_cost);
    }
  }
}

TEST(SolveFromRowSeedTest, OptimalSeedIsIdle) {
  auto inst = GenLabels(GenDense(64, 3));
  PipelineConfig cfg;
  cfg.tau = 0.0;
  auto w = SolveFromRowSeed(inst.c, inst.u_star, cfg);
  EXPECT_EQ(w.report.solve_stats.dual_update_steps, 0);
  EXPECT_EQ(w.report.solve_stats.greedy_matched, 64);
  EXPECT_GE(w.report.density_rho, 1.0);
}

// Noisier seeds: fewer near-tight edges and more solver work.
TEST(SolveFromRowSeedTest, NoiseSweepIsMonotone) {
  std::vector<LabeledInstance> data;
  for (std::uint64_t s = 0; s < 20; ++s) data.push_back(GenLabels(GenDense(48, 100 + s)));
  PipelineConfig cfg;
  cfg.tau = 0.0;
  double prev_rho = std::numeric_limits<double>::infinity();
  double prev_dus = -1;
  for (double sigma : {0.0, 0.05, 0.1, 0.2}) {
    CounterRng rng(5);
    double rho = 0, dus = 0;
    for (const auto& inst : data) {
      auto u = inst.u_star;
      for (auto& x : u) x += sigma * inst.c.range() * rng.Normal();
      auto w = SolveFromRowSeed(inst.c, u, cfg);
      rho += w.report.density_rho;
      dus += w.report.solve_stats.dual_update_steps;
      EXPECT_EQ(w.report.total_cost, SolveCold(inst.c).assignment.total_cost);
    }
    EXPECT_LE(rho, prev_rho) << sigma;
    EXPECT_GE(dus, prev_dus) << sigma;
    prev_rho = rho;
    prev_dus = dus;
  }
}

}  // namespace
}  // namespace dualseed
