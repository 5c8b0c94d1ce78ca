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

#include "dualseed/baselines.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "dualseed/datagen.hpp"
#include "dualseed/warmstart.hpp"
#include "test_util.hpp"

namespace dualseed {
namespace {

PipelineConfig NoFallback() {
  PipelineConfig cfg;
  cfg.tau = 0.0;
  return cfg;
}

TEST(RowMeanTest, Examples) {
  EXPECT_EQ(SeedRowMean(CostMatrix::FromRows({{1, 2, 3}, {0, 0, 3}, {9, 9, 9}})),
            (std::vector<double>{2, 1, 9}));
  EXPECT_EQ(SeedRowMean(CostMatrix::FromRows({{4.5}})), (std::vector<double>{4.5}));
}

TEST(RowMeanTest, ConstantMatrixFullyTight) {
  CostMatrix c(6, std::vector<double>(36, 2.5));
  auto u = SeedRowMean(c);
  for (double x : u) EXPECT_EQ(x, 2.5);
  auto mt = MinTrick(c, u);
  EXPECT_DOUBLE_EQ(EqualityDensity(c, mt.duals, 1e-5), 6.0);
}

TEST(RandomSeedTest, DeterministicAndInRange) {
  auto c = GenDense(50, 1);
  auto a = SeedRandom(c, 7);
  EXPECT_EQ(a, SeedRandom(c, 7));
  EXPECT_NE(a, SeedRandom(c, 8));
  for (double x : a) {
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_TRUE(IsDualFeasible(c, MinTrick(c, a).duals, 0.0));
}

TEST(LinRegTest, RecoversAffineLabels) {
  std::vector<LabeledInstance> data;
  const std::vector<double> w{0.3, -1.2, 0.05, 2.0};
  const double b = -0.7;
  PipelineConfig cfg;
  cfg.feature_dim = 4;
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto inst = GenLabels(GenDense(20, s), cfg);
    for (std::size_t i = 0; i < 20; ++i) {
      double y = b;
      for (std::size_t k = 0; k < 4; ++k) y += w[k] * inst.features.at(i, k);
      inst.u_star[i] = y;
    }
    data.push_back(std::move(inst));
  }
  auto m = TrainLinReg(data);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(m.w[k], w[k], 1e-8);
  EXPECT_NEAR(m.b, b, 1e-8);
  double worst = 0;
  for (const auto& inst : data) {
    auto u = SeedLinReg(inst.features, m);
    ASSERT_EQ(u.size(), 20u);
    for (std::size_t i = 0; i < 20; ++i) worst = std::max(worst, std::abs(u[i] - inst.u_star[i]));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(LinRegTest, ZeroWeightsGiveBias) {
  auto c = GenDense(7, 2);
  auto f = ExtractFeatures(c, PipelineConfig{});
  LinRegWeights m{std::vector<double>(21, 0.0), 0.42};
  for (double x : SeedLinReg(f, m)) EXPECT_EQ(x, 0.42);
  LinRegWeights wrong{std::vector<double>(4, 0.0), 0.0};
  EXPECT_THROW(SeedLinReg(f, wrong), Error);
}

TEST(LinRegTest, SingularWithoutRidge) {
  // Three samples cannot determine 22 coefficients.
  std::vector<LabeledInstance> data{GenLabels(CostMatrix(3, std::vector<double>(9, 1.0)))};
  try {
    TrainLinReg(data, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularSystem);
  }
  EXPECT_NO_THROW(TrainLinReg(data));
}

TEST(LearnedMedianTest, Examples) {
  EXPECT_EQ(SeedLearnedMedian({{1, 3}, {2, 4}, {3, 5}}), (std::vector<double>{2, 4}));
  EXPECT_EQ(SeedLearnedMedian({{5, -1, 2}}), (std::vector<double>{5, -1, 2}));
  EXPECT_EQ(SeedLearnedMedian({{1}, {4}}), (std::vector<double>{1}));
  try {
    SeedLearnedMedian({{1, 2}, {3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_THROW(ApplyLearnedMedian({1, 2}, GenDense(3, 1)), Error);
}

TEST(LearnedMedianTest, MatchesSortingOracle) {
  CounterRng rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng.Below(9), n = 1 + rng.Below(6);
    std::vector<std::vector<double>> duals(m, std::vector<double>(n));
    for (auto& d : duals) {
      for (auto& x : d) x = static_cast<double>(rng.Below(5));
    }
    auto med = SeedLearnedMedian(duals);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> col;
      for (const auto& d : duals) col.push_back(d[i]);
      std::sort(col.begin(), col.end());
      EXPECT_EQ(med[i], col[(m - 1) / 2]);
    }
  }
}

TEST(SubgradientTest, HandComputedSubgradient) {
  CostMatrix c(2, std::vector<double>(4, 0.0));
  std::vector<double> u{0, 0};
  auto dv = EvaluateDual(c, u);
  EXPECT_EQ(dv.subgrad, (std::vector<double>{-1, 1}));
  EXPECT_EQ(dv.g, 0.0);
}

TEST(SubgradientTest, OptimalDualsAttainOptimum) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto inst = GenLabels(GenDense(25, s));
    const double opt = SolveCold(inst.c).assignment.total_cost;
    EXPECT_NEAR(EvaluateDual(inst.c, inst.u_star).g, opt, 1e-9);
  }
}

TEST(SubgradientTest, TinyBudgetReturnsRowMinima) {
  auto c = GenDense(30, 3);
  SubgradientConfig cfg;
  cfg.time_budget_ns = 1;
  auto r = SeedSubgradient(c, cfg);
  EXPECT_EQ(r.iterations, 0);
  for (std::size_t i = 0; i < 30; ++i) {
    auto row = c.row(i);
    EXPECT_EQ(r.u[i], *std::min_element(row.begin(), row.end()));
  }
}

TEST(SubgradientTest, BestValueMonotoneAndBelowOptimum) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto c = GenDense(40, 10 + s);
    SubgradientConfig cfg;
    cfg.time_budget_ns = std::numeric_limits<std::int64_t>::max();
    cfg.max_iters = 300;
    cfg.record_history = true;
    auto r = SeedSubgradient(c, cfg);
    EXPECT_EQ(r.iterations, 300);
    const double opt = SolveCold(c).assignment.total_cost;
    ASSERT_FALSE(r.history.empty());
    for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_GE(r.history[k], r.history[k - 1]);
    EXPECT_LE(r.best_g, opt + 1e-9 * 40 * c.max_abs());
    EXPECT_GT(r.history.back(), r.history.front());
  }
}

TEST(BaselineSafetyTest, EverySeedIsExact) {
  CounterRng rng(9);
  std::vector<LabeledInstance> train;
  for (std::uint64_t s = 0; s < 4; ++s) train.push_back(GenLabels(GenDense(16, 500 + s)));
  auto lin = TrainLinReg(train);
  std::vector<std::vector<double>> duals;
  for (const auto& t : train) duals.push_back(t.u_star);
  auto median = SeedLearnedMedian(duals);
  for (int t = 0; t < 30; ++t) {
    auto c = t % 2 ? GenDense(16, 900 + t) : testing::RandomIntMatrix(16, rng, 0, 9);
    const double opt = SolveCold(c).assignment.total_cost;
    SubgradientConfig sg;
    sg.time_budget_ns = 200'000;
    std::vector<std::vector<double>> seeds{
        SeedRowMean(c), SeedRandom(c, t), SeedLinReg(ExtractFeatures(c, PipelineConfig{}), lin),
        ApplyLearnedMedian(median, c), SeedSubgradient(c, sg).u};
    for (const auto& u : seeds) {
      auto w = SolveFromRowSeed(c, u, NoFallback());
      EXPECT_EQ(w.report.total_cost, opt);
      EXPECT_TRUE(VerifyCertificate(c, w.assignment, w.duals).ok);
    }
  }
}

}  // namespace
}  // namespace dualseed
