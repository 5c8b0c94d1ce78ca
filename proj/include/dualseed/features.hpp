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

// Row-centric features. Each row of the cost matrix is summarized by a fixed
// number of statistics, independent of n, in this order:
//
//   0  row_min      5  difficulty    10 rank_mean
//   1  row_max      6  near_best     11 rank_std
//   2  row_mean     7  is_col_best   12 norm_rank
//   3  row_std      8  k_mean        13..20 sin/cos positional encodings
//   4  entropy      9  k_std                at frequencies 1, 2, 4, 8
//
// Every statistic is computed from the sorted row (or from integer column
// ranks), so permuting columns leaves the features bit-identical.

#ifndef DUALSEED_FEATURES_HPP_
#define DUALSEED_FEATURES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "dualseed/cost_matrix.hpp"
#include "dualseed/pipeline_config.hpp"

namespace dualseed {

inline constexpr int kNumStatFeatures = 13;
inline constexpr int kNumPositionalFeatures = 8;
inline constexpr int kFullFeatureDim = kNumStatFeatures + kNumPositionalFeatures;
inline constexpr double kDifficultyGuard = 1e-12;
inline constexpr double kZScoreStdFloor = 1e-8;

struct FeatureVector {
  double row_min = 0, row_max = 0, row_mean = 0, row_std = 0;
  double entropy = 0, difficulty = 0;
  double near_best = 0, is_col_best = 0;
  double k_mean = 0, k_std = 0, rank_mean = 0, rank_std = 0, norm_rank = 0;
  std::array<double, kNumPositionalFeatures> pe{};

  std::array<double, kFullFeatureDim> ToArray() const {
    std::array<double, kFullFeatureDim> out{
        row_min, row_max,   row_mean,  row_std,  entropy,  difficulty, near_best,
        is_col_best, k_mean, k_std, rank_mean, rank_std, norm_rank};
    std::copy(pe.begin(), pe.end(), out.begin() + kNumStatFeatures);
    return out;
  }
};

// n x d row-major feature matrix.
struct FeatureMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t dims)
      : n(rows), d(dims), values(rows * dims, 0.0) {}

  double& at(std::size_t i, std::size_t k) { return values[i * d + k]; }
  double at(std::size_t i, std::size_t k) const { return values[i * d + k]; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * d, d};
  }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

namespace detail {

inline double PopulationStd(std::span<const double> xs, double mean) {
  if (xs.empty()) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

inline double Mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace detail

// Unnormalized per-row features.
inline std::vector<FeatureVector> RawFeatures(const CostMatrix& c,
                                              const PipelineConfig& cfg = {}) {
  const std::size_t n = c.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.feature_k), n);
  std::vector<FeatureVector> out(n);

  // Column-wise pass: who holds each column minimum, and the competition
  // rank (count of strictly smaller entries) of every entry in its column.
  std::vector<int> col_best_count(n, 0);
  {
    std::vector<double> colmin(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> argmin(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = c.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (row[j] < colmin[j]) {
          colmin[j] = row[j];
          argmin[j] = i;
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) ++col_best_count[argmin[j]];
  }
  std::vector<double> rank_sum(n, 0.0), rank_sq_sum(n, 0.0);
  {
    std::vector<std::pair<double, std::size_t>> column(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) column[i] = {c(i, j), i};
      std::sort(column.begin(), column.end());
      double rank = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        if (p > 0 && column[p].first != column[p - 1].first) {
          rank = static_cast<double>(p);
        }
        rank_sum[column[p].second] += rank;
        rank_sq_sum[column[p].second] += rank * rank;
      }
    }
  }

  const double dn = static_cast<double>(n);
  const double rank_scale = n > 1 ? 1.0 / (dn - 1.0) : 0.0;
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = c.row(i);
    std::copy(row.begin(), row.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    FeatureVector& f = out[i];
    f.row_min = sorted.front();
    f.row_max = sorted.back();
    f.row_mean = detail::Mean(sorted);
    f.row_std = detail::PopulationStd(sorted, f.row_mean);

    // Shannon entropy of softmax(-row), shifted by the row minimum.
    double z = 0.0, weighted = 0.0;
    for (double x : sorted) {
      const double w = std::exp(-(x - f.row_min));
      z += w;
      weighted += w * (x - f.row_min);
    }
    f.entropy = std::max(0.0, std::log(z) + weighted / z);

    // Mean consecutive gap of the sorted row telescopes to range / (n - 1).
    const double mean_gap = n > 1 ? (f.row_max - f.row_min) / (dn - 1.0) : 0.0;
    f.difficulty = 1.0 / (mean_gap + kDifficultyGuard);

    const double near_threshold = f.row_min + 0.1 * std::abs(f.row_min);
    const auto near_count = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), near_threshold) -
        sorted.begin());
    f.near_best = static_cast<double>(near_count) / dn;
    f.is_col_best = static_cast<double>(col_best_count[i]) / dn;

    std::span<const double> smallest(sorted.data(), k);
    f.k_mean = detail::Mean(smallest);
    f.k_std = detail::PopulationStd(smallest, f.k_mean);

    const double rmean = rank_sum[i] / dn;
    const double rvar = std::max(0.0, rank_sq_sum[i] / dn - rmean * rmean);
    f.rank_mean = rmean * rank_scale;
    f.rank_std = std::sqrt(rvar) * rank_scale;
    f.norm_rank = 1.0 - f.rank_mean;

    static constexpr std::array<double, 4> kFreqs{1.0, 2.0, 4.0, 8.0};
    for (std::size_t m = 0; m < kFreqs.size(); ++m) {
      const double angle =
          2.0 * std::numbers::pi * kFreqs[m] * static_cast<double>(i) / dn;
      f.pe[2 * m] = std::sin(angle);
      f.pe[2 * m + 1] = std::cos(angle);
    }
  }
  return out;
}

// Model input: the first cfg.feature_dim features, with the statistical
// ones z-scored across the rows of this instance (positional encodings
// pass through unchanged).
inline FeatureMatrix ExtractFeatures(const CostMatrix& c,
                                     const PipelineConfig& cfg = {}) {
  cfg.Validate();
  const auto raw = RawFeatures(c, cfg);
  const std::size_t n = c.size();
  const auto d = static_cast<std::size_t>(cfg.feature_dim);
  FeatureMatrix fm(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto arr = raw[i].ToArray();
    for (std::size_t k = 0; k < d; ++k) {
      // d = 4 and d = 13 keep a prefix; d = 21 is everything.
      fm.at(i, k) = arr[k];
    }
  }
  const std::size_t stat_dims = std::min<std::size_t>(d, kNumStatFeatures);
  std::vector<double> col(n);
  for (std::size_t k = 0; k < stat_dims; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = fm.at(i, k);
    const double mean = detail::Mean(col);
    const double sd = std::max(detail::PopulationStd(col, mean), kZScoreStdFloor);
    for (std::size_t i = 0; i < n; ++i) fm.at(i, k) = (fm.at(i, k) - mean) / sd;
  }
  return fm;
}

}  // namespace dualseed

#endif  // DUALSEED_FEATURES_HPP_
