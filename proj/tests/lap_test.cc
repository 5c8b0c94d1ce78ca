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

#include "dualseed/lap.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "test_util.hpp"

namespace dualseed {
namespace {

using testing::RandomFeasibleSeed;
using testing::RandomIntMatrix;
using testing::RandomUniformMatrix;

void ExpectCertified(const CostMatrix& c, const SolveResult& r) {
  auto cert = VerifyCertificate(c, r.assignment, r.duals);
  EXPECT_TRUE(cert.ok) << "reason " << static_cast<int>(cert.reason);
  EXPECT_EQ(r.stats.greedy_matched + r.stats.free_rows,
            static_cast<int>(c.size()));
  EXPECT_EQ(r.stats.augment_searches, r.stats.free_rows);
}

TEST(SolveColdTest, DiagonalTwoByTwo) {
  auto c = CostMatrix::FromRows({{1, 2}, {2, 1}});
  auto r = SolveCold(c);
  EXPECT_EQ(r.assignment.total_cost, 2.0);
  EXPECT_EQ(r.assignment.row_to_col, (std::vector<int>{0, 1}));
  ExpectCertified(c, r);
}

TEST(SolveColdTest, ThreeByThreeMatchesEnumeration) {
  // Six permutations: 012->7, 021->11, 102->5, 120->13, 201->8, 210->12.
  auto c = CostMatrix::FromRows({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}});
  auto r = SolveCold(c);
  EXPECT_EQ(r.assignment.total_cost, 5.0);
  EXPECT_EQ(r.assignment.row_to_col, (std::vector<int>{1, 0, 2}));
  ExpectCertified(c, r);
}

TEST(SolveColdTest, OneByOne) {
  auto c = CostMatrix::FromRows({{-3.25}});
  auto r = SolveCold(c);
  EXPECT_EQ(r.assignment.total_cost, -3.25);
  EXPECT_EQ(r.assignment.row_to_col, (std::vector<int>{0}));
  ExpectCertified(c, r);
}

TEST(SolveColdTest, RejectsInvalidMatrices) {
  EXPECT_THROW(CostMatrix(0, {}), Error);
  try {
    CostMatrix(2, {1.0, std::nan(""), 0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
  EXPECT_THROW(CostMatrix(2, {1.0, 2.0, 3.0}), Error);
}

TEST(SolveColdTest, MatchesBruteForceOnRandomUniform8x8) {
  CounterRng rng(101);
  for (int t = 0; t < 100; ++t) {
    auto c = RandomUniformMatrix(8, rng);
    auto r = SolveCold(c);
    auto bf = BruteForce(c);
    EXPECT_NEAR(r.assignment.total_cost, bf.total_cost, 1e-12);
    // U(0,1) has no ties almost surely: same permutation, same summation order.
    EXPECT_EQ(r.assignment.total_cost, bf.total_cost);
    ExpectCertified(c, r);
  }
}

TEST(SolveColdTest, IntegerMatricesWithManyTies) {
  CounterRng rng(7);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 1 + rng.Below(8);
    auto c = RandomIntMatrix(n, rng, 0, 3);
    auto r = SolveCold(c);
    EXPECT_EQ(r.assignment.total_cost, BruteForce(c).total_cost);
    ExpectCertified(c, r);
  }
}

TEST(SolveColdTest, Deterministic) {
  CounterRng rng(3);
  auto c = RandomUniformMatrix(40, rng);
  auto a = SolveCold(c);
  auto b = SolveCold(c);
  EXPECT_EQ(a.assignment.row_to_col, b.assignment.row_to_col);
  EXPECT_EQ(a.duals, b.duals);
  EXPECT_TRUE(a.stats.SameCounters(b.stats));
  EXPECT_EQ(a.stats.phase_times.size(), 3u);
}

TEST(SolveSeededTest, HandComputedSeedIsFullyGreedy) {
  auto c = CostMatrix::FromRows({{1, 2}, {2, 1}});
  DualPotentials seed{{1, 2}, {0, -1}};
  auto r = SolveSeeded(c, seed);
  EXPECT_EQ(r.assignment.total_cost, 2.0);
  EXPECT_EQ(r.stats.greedy_matched, 2);
  EXPECT_EQ(r.stats.dual_update_steps, 0);
  ExpectCertified(c, r);
}

TEST(SolveSeededTest, ZeroSeedOnNonNegativeMatrix) {
  auto c = CostMatrix::FromRows({{1, 2}, {2, 1}});
  auto r = SolveSeeded(c, DualPotentials{{0, 0}, {0, 0}});
  EXPECT_EQ(r.assignment.total_cost, 2.0);
  EXPECT_EQ(r.assignment.row_to_col, SolveCold(c).assignment.row_to_col);
  ExpectCertified(c, r);
}

TEST(SolveSeededTest, RejectsInfeasibleSeed) {
  auto c = CostMatrix::FromRows({{1, 2}, {2, 1}});
  try {
    SolveSeeded(c, DualPotentials{{1.5, 0}, {0, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleSeed);
  }
  EXPECT_THROW(SolveSeeded(c, DualPotentials{{0}, {0, 0}}), Error);
}

TEST(SolveSeededTest, ArbitraryFeasibleSeedsAreExact) {
  CounterRng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + rng.Below(9);
    bool integer = t % 2 == 0;
    auto c = integer ? RandomIntMatrix(n, rng, -5, 12) : RandomUniformMatrix(n, rng);
    auto bf = BruteForce(c);
    for (int s = 0; s < 5; ++s) {
      auto seed = RandomFeasibleSeed(c, rng, integer ? 10.0 : 1.0);
      auto r = SolveSeeded(c, seed);
      if (integer) {
        EXPECT_EQ(r.assignment.total_cost, bf.total_cost);
      } else {
        EXPECT_NEAR(r.assignment.total_cost, bf.total_cost, 1e-9);
      }
      ExpectCertified(c, r);
    }
  }
}

TEST(SolveSeededTest, SeedIndependentValueOn32x32) {
  CounterRng rng(5);
  auto c = RandomUniformMatrix(32, rng);
  const double cold = SolveCold(c).assignment.total_cost;
  for (int s = 0; s < 200; ++s) {
    auto r = SolveSeeded(c, RandomFeasibleSeed(c, rng, 2.0));
    EXPECT_NEAR(r.assignment.total_cost, cold, 1e-12);
  }
}

TEST(SolveSeededTest, OptimalSeedIsIdle) {
  CounterRng rng(17);
  for (int t = 0; t < 50; ++t) {
    auto c = RandomUniformMatrix(16, rng);
    auto cold = SolveCold(c);
    // Gauge-fix u and rebuild v column-wise from it.
    DualPotentials seed;
    double mean = 0.0;
    for (double x : cold.duals.u) mean += x;
    mean /= 16.0;
    for (double x : cold.duals.u) seed.u.push_back(x - mean);
    seed.v.assign(16, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j)
        seed.v[j] = std::min(seed.v[j], c(i, j) - seed.u[i]);
    auto r = SolveSeeded(c, seed);
    EXPECT_EQ(r.stats.dual_update_steps, 0);
    EXPECT_EQ(r.duals, seed);
    EXPECT_NEAR(r.assignment.total_cost, cold.assignment.total_cost, 1e-12);
  }
}

TEST(VerifyCertificateTest, DetectsInfeasibleDual) {
  CounterRng rng(2);
  auto c = RandomUniformMatrix(6, rng);
  auto r = SolveCold(c);
  ASSERT_TRUE(VerifyCertificate(c, r.assignment, r.duals).ok);
  auto d = r.duals;
  d.u[3] += 2.0 * c.range();
  auto cert = VerifyCertificate(c, r.assignment, d);
  EXPECT_FALSE(cert.ok);
  EXPECT_EQ(cert.reason, CertificateReason::kInfeasibleDual);
}

TEST(VerifyCertificateTest, DetectsSlacknessViolation) {
  auto c = CostMatrix::FromRows({{0, 1}, {1, 0}});
  auto r = SolveCold(c);
  ASSERT_TRUE(VerifyCertificate(c, r.assignment, r.duals).ok);
  auto a = r.assignment;
  std::swap(a.row_to_col[0], a.row_to_col[1]);
  auto cert = VerifyCertificate(c, a, r.duals);
  EXPECT_FALSE(cert.ok);
  EXPECT_EQ(cert.reason, CertificateReason::kSlacknessViolated);
}

TEST(VerifyCertificateTest, DetectsNonPermutation) {
  auto c = CostMatrix::FromRows({{0, 1}, {1, 0}});
  auto r = SolveCold(c);
  auto a = r.assignment;
  a.row_to_col = {0, 0};
  EXPECT_EQ(VerifyCertificate(c, a, r.duals).reason,
            CertificateReason::kNotPermutation);
}

TEST(BruteForceTest, Examples) {
  auto a = BruteForce(CostMatrix::FromRows({{1, 2}, {2, 1}}));
  EXPECT_EQ(a.total_cost, 2.0);
  EXPECT_EQ(a.row_to_col, (std::vector<int>{0, 1}));
  auto b = BruteForce(CostMatrix::FromRows({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}}));
  EXPECT_EQ(b.total_cost, 5.0);
  EXPECT_EQ(b.row_to_col, (std::vector<int>{1, 0, 2}));
  auto c = BruteForce(CostMatrix::FromRows({{5}}));
  EXPECT_EQ(c.total_cost, 5.0);
  EXPECT_EQ(c.row_to_col, (std::vector<int>{0}));
}

TEST(BruteForceTest, TiesPickLexicographicallySmallest) {
  auto a = BruteForce(CostMatrix(3, std::vector<double>(9, 1.0)));
  EXPECT_EQ(a.row_to_col, (std::vector<int>{0, 1, 2}));
}

TEST(BruteForceTest, RejectsLargeN) {
  try {
    BruteForce(CostMatrix(11, std::vector<double>(121, 0.0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(SentinelTest, MaskedEdgesAvoided) {
  // Forbidden diagonal except a feasible off-diagonal matching.
  const double s = 1000.0;
  CostMatrix c(3, {s, 1, 5, 5, s, 1, 1, 5, s}, s);
  auto r = SolveCold(c);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_FALSE(c.is_masked(i, r.assignment.row_to_col[i]));
  }
  EXPECT_EQ(r.assignment.total_cost, 3.0);
}

}  // namespace
}  // namespace dualseed
