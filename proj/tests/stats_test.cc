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

#include "dualseed/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace dualseed {
namespace {

RunRecord Make(const std::string& strategy, int trial, std::int64_t wall, int searches = 10) {
  RunRecord r;
  r.strategy = strategy;
  r.generator = "dense";
  r.n = 8;
  r.trial = trial;
  r.wall_ns = wall;
  r.augment_searches = searches;
  r.total_cost = 1.5;
  return r;
}

TEST(SummarizeTest, SelfRatioIsOne) {
  std::vector<RunRecord> rs{Make("cold", 0, 100), Make("cold", 1, 250), Make("cold", 2, 7)};
  auto s = Summarize(rs);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].speedup_mean, 1.0);
  EXPECT_EQ(s[0].speedup_median, 1.0);
  EXPECT_EQ(s[0].ci_low, 1.0);
  EXPECT_EQ(s[0].ci_high, 1.0);
}

TEST(SummarizeTest, ConstantRatioTwo) {
  std::vector<RunRecord> rs;
  for (int t = 0; t < 4; ++t) {
    rs.push_back(Make("cold", t, 200 * (t + 1)));
    rs.push_back(Make("neural", t, 100 * (t + 1)));
  }
  auto s = Summarize(rs);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].strategy, "neural");
  EXPECT_EQ(s[1].speedup_mean, 2.0);
  EXPECT_EQ(s[1].ci_high - s[1].ci_low, 0.0);
}

TEST(SummarizeTest, HandComputedValues) {
  // Ratios 2, 1, 4: mean 7/3, sample std sqrt(7/3), median 2.
  std::vector<RunRecord> rs{Make("cold", 0, 2), Make("x", 0, 1, 5),  Make("cold", 1, 2),
                            Make("x", 1, 2, 10), Make("cold", 2, 4), Make("x", 2, 1, 0)};
  rs[5].fallback_triggered = true;
  rs[1].greedy_match_rate = 0.5;
  auto s = Summarize(rs);
  const auto& x = s[1];
  EXPECT_NEAR(x.speedup_mean, 7.0 / 3.0, 1e-6);
  const double half = 1.96 * std::sqrt(7.0 / 3.0) / std::sqrt(3.0);
  EXPECT_NEAR(x.ci_high - x.ci_low, 2 * half, 1e-6);
  EXPECT_NEAR(x.ci_low, 7.0 / 3.0 - half, 1e-6);
  EXPECT_NEAR(x.speedup_median, 2.0, 1e-6);
  // Walls 1, 2, 1: CV = sqrt(2/9) / (4/3).
  EXPECT_NEAR(x.cv, std::sqrt(2.0 / 9.0) / (4.0 / 3.0), 1e-6);
  EXPECT_NEAR(x.augment_reduction, (0.5 + 0.0 + 1.0) / 3.0, 1e-6);
  EXPECT_NEAR(x.fallback_rate, 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(x.greedy_rate_mean, 0.5 / 3.0, 1e-6);
  EXPECT_EQ(x.wall_min_ns, 1.0);
  EXPECT_EQ(x.wall_max_ns, 2.0);
}

TEST(SummarizeTest, CvOfOneTwoThree) {
  std::vector<double> w{1, 2, 3};
  EXPECT_NEAR(CoefficientOfVariation(w), 0.408248, 1e-6);
  std::vector<RunRecord> rs{Make("cold", 0, 1), Make("cold", 1, 2), Make("cold", 2, 3)};
  EXPECT_NEAR(Summarize(rs)[0].cv, 0.408248, 1e-6);
}

TEST(SummarizeTest, InsufficientTrials) {
  std::vector<RunRecord> rs{Make("cold", 0, 1), Make("neural", 0, 1)};
  try {
    Summarize(rs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientTrials);
  }
}

TEST(SummarizeTest, ErrorRecordsSkipped) {
  std::vector<RunRecord> rs{Make("cold", 0, 1), Make("cold", 1, 1), Make("x", 0, 1),
                            Make("x", 1, 1)};
  rs[3].error = "boom";
  EXPECT_THROW(Summarize(rs), Error);
}

TEST(SummaryCsvTest, HeaderAndColumnCount) {
  std::vector<RunRecord> rs{Make("cold", 0, 1), Make("cold", 1, 2)};
  auto csv = SummaryCsv(Summarize(rs));
  auto first = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(first, kSummaryHeader);
  auto second = csv.substr(first.size() + 1);
  EXPECT_EQ(std::count(second.begin(), second.end(), ','),
            std::count(first.begin(), first.end(), ','));
}

TEST(BreakdownTest, PercentagesSumToHundred) {
  std::vector<RunRecord> rs;
  for (int t = 0; t < 3; ++t) {
    auto r = Make("neural", t, 0);
    r.stage_times = {{"features", 10 + t}, {"model", 20}, {"min_trick", 5},
                     {"fallback_check", 5}, {"solver", 100 * t + 1}};
    rs.push_back(r);
  }
  auto b = BreakdownTable(rs);
  ASSERT_EQ(b.size(), 1u);
  double total = 0;
  for (const auto& [s, p] : b[0].percent) total += p;
  EXPECT_NEAR(total, 100.0, 0.1);
  EXPECT_NEAR(b[0].mean_ms.at("features"), 11e-6, 1e-12);
  rs.push_back(Make("cold", 0, 5));
  rs.back().stage_times = {{"solver", 5}};
  EXPECT_THROW(BreakdownTable(rs), Error);
}

TEST(RunRecordTest, JsonRoundTrip) {
  auto r = Make("neural", 3, 12345);
  r.stage_times = {{"solver", 7}};
  r.density_rho = 1.25;
  r.error = "";
  auto back = RunRecordFromJson(ToJson(r));
  EXPECT_EQ(ToJson(back), ToJson(r));
  EXPECT_THROW(RunRecordFromJson(nlohmann::json{{"strategy", "x"}}), Error);
}

TEST(CostDisagreementsTest, DetectsMismatch) {
  std::vector<RunRecord> rs{Make("cold", 0, 1), Make("x", 0, 1)};
  EXPECT_TRUE(CostDisagreements(rs).empty());
  rs[1].total_cost = 2.0;
  EXPECT_EQ(CostDisagreements(rs).size(), 1u);
}

}  // namespace
}  // namespace dualseed
