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

// Synthetic instance generators and ground-truth dual labels.

#ifndef DUALSEED_DATAGEN_HPP_
#define DUALSEED_DATAGEN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "dualseed/cost_matrix.hpp"
#include "dualseed/error.hpp"
#include "dualseed/features.hpp"
#include "dualseed/lap.hpp"
#include "dualseed/pipeline_config.hpp"
#include "dualseed/rng.hpp"
#include "dualseed/rowdualnet.hpp"

namespace dualseed {

namespace detail {
inline constexpr std::uint64_t kDenseStream = 1;
inline constexpr std::uint64_t kBlockStream = 2;
inline constexpr std::uint64_t kSparsifyStream = 3;
}  // namespace detail

// i.i.d. U(0, 1) entries.
inline CostMatrix GenDense(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "n must be >= 1");
  CounterRng rng(seed, detail::kDenseStream);
  std::vector<double> vals(n * n);
  for (auto& x : vals) x = rng.Uniform();
  return CostMatrix(n, std::move(vals));
}

struct BlockParams {
  std::size_t n = 0;
  // 0 selects the default floor(n / 10), at least 1.
  std::size_t num_groups = 0;
  std::vector<double> levels{1, 2, 4, 8, 16};
  std::vector<double> probs{0.45, 0.25, 0.15, 0.10, 0.05};
  // Diagonal group pairs draw only from the first `diag_levels` levels.
  std::size_t diag_levels = 2;
  // Negative selects the default 0.05 * (max level - min level).
  double noise_sigma = -1.0;
  std::uint64_t seed = 0;

  std::size_t Groups() const {
    return num_groups > 0 ? num_groups : std::max<std::size_t>(1, n / 10);
  }
  double Sigma() const {
    if (noise_sigma >= 0.0) return noise_sigma;
    auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
    return 0.05 * (*hi - *lo);
  }
  void Validate() const {
    if (n < 1) throw Error(ErrorCode::kInvalidInput, "n must be >= 1");
    if (levels.empty() || levels.size() != probs.size()) {
      throw Error(ErrorCode::kInvalidInput, "levels and probs must be non-empty and equal length");
    }
    if (diag_levels < 1 || diag_levels > levels.size()) {
      throw Error(ErrorCode::kInvalidInput, "diag_levels out of range");
    }
    for (double p : probs) {
      if (!(p >= 0.0)) throw Error(ErrorCode::kInvalidInput, "negative level probability");
    }
    if (Groups() > n) throw Error(ErrorCode::kInvalidInput, "more groups than rows");
    if (!(noise_sigma < 0.0 || std::isfinite(noise_sigma))) {
      throw Error(ErrorCode::kInvalidInput, "noise_sigma must be finite");
    }
  }
};

namespace detail {

inline double DrawLevel(CounterRng& rng, const std::vector<double>& levels,
                        const std::vector<double>& probs, std::size_t count) {
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) total += probs[k];
  if (total <= 0.0) return levels[0];
  double x = rng.Uniform() * total;
  for (std::size_t k = 0; k < count; ++k) {
    if (x < probs[k]) return levels[k];
    x -= probs[k];
  }
  return levels[count - 1];
}

}  // namespace detail

// Block-structured costs: contiguous groups of size ceil(n / L), a base
// cost per group pair and Gaussian noise, clamped at zero.
inline CostMatrix GenBlock(const BlockParams& p) {
  p.Validate();
  const std::size_t n = p.n;
  const std::size_t groups = p.Groups();
  const std::size_t size = (n + groups - 1) / groups;
  CounterRng rng(p.seed, detail::kBlockStream);
  std::vector<double> base(groups * groups);
  for (std::size_t a = 0; a < groups; ++a) {
    for (std::size_t b = 0; b < groups; ++b) {
      base[a * groups + b] = detail::DrawLevel(
          rng, p.levels, p.probs, a == b ? p.diag_levels : p.levels.size());
    }
  }
  const double sigma = p.Sigma();
  CounterRng noise = rng.Substream(1);
  std::vector<double> vals(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double x = base[(i / size) * groups + j / size];
      if (sigma > 0.0) x = std::max(0.0, x + sigma * noise.Normal());
      vals[i * n + j] = x;
    }
  }
  return CostMatrix(n, std::move(vals));
}

inline constexpr double kMaxMaskFraction = 0.9;

// Replaces round(mask_fraction * n^2) uniformly chosen entries by a
// sentinel cost, never touching a hidden random perfect matching.
inline CostMatrix Sparsify(const CostMatrix& c, double mask_fraction,
                           std::uint64_t seed) {
  if (!(mask_fraction >= 0.0 && mask_fraction <= kMaxMaskFraction)) {
    throw Error(ErrorCode::kInvalidInput, "mask_fraction must be in [0, 0.9]");
  }
  if (mask_fraction == 0.0) return c;
  const std::size_t n = c.size();
  const std::size_t target =
      static_cast<std::size_t>(std::llround(mask_fraction * static_cast<double>(n * n)));
  if (target > n * n - n) {
    throw Error(ErrorCode::kInfeasibleMask,
                "cannot mask " + std::to_string(target) + " of " +
                    std::to_string(n * n) + " entries and keep a perfect matching");
  }
  CounterRng rng(seed, detail::kSparsifyStream);
  std::vector<std::size_t> keep(n);
  std::iota(keep.begin(), keep.end(), 0);
  rng.Shuffle(std::span<std::size_t>(keep));

  std::vector<std::size_t> candidates;
  candidates.reserve(n * n - n);
  std::size_t already = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == keep[i]) continue;
      if (c.is_masked(i, j)) {
        ++already;
      } else {
        candidates.push_back(i * n + j);
      }
    }
  }
  const std::size_t todo = target > already ? target - already : 0;
  // Partial Fisher-Yates: the first `todo` slots become a uniform sample.
  for (std::size_t k = 0; k < todo; ++k) {
    std::size_t pick = k + static_cast<std::size_t>(rng.Below(candidates.size() - k));
    std::swap(candidates[k], candidates[pick]);
  }
  double sentinel;
  if (c.sentinel()) {
    sentinel = *c.sentinel();
  } else {
    sentinel = c.max_value() + static_cast<double>(n) * std::max(c.range(), 1.0);
  }
  std::vector<double> vals(c.values().begin(), c.values().end());
  for (std::size_t k = 0; k < todo; ++k) vals[candidates[k]] = sentinel;
  return CostMatrix(n, std::move(vals), sentinel);
}

// Shifts u by -mean(u) and v by +mean(u).
inline DualPotentials GaugeFix(const DualPotentials& d) {
  DualPotentials out = d;
  if (d.u.empty()) return out;
  const double m = std::accumulate(d.u.begin(), d.u.end(), 0.0) /
                   static_cast<double>(d.u.size());
  for (auto& x : out.u) x -= m;
  for (auto& x : out.v) x += m;
  return out;
}

inline constexpr int kDefaultCenteringSweeps = 20;

// Moves optimal row potentials towards the middle of the optimal dual face
// of the assignment `cols` (u_i - u_k <= C_{i,cols[k]} - C_{k,cols[k]}),
// one row at a time, then rebuilds v by the min-trick. Every step keeps the
// point in the face, so the result is still optimal.
inline DualPotentials CenterInOptimalFace(const CostMatrix& c,
                                          const std::vector<int>& cols,
                                          const DualPotentials& start,
                                          int sweeps = kDefaultCenteringSweeps) {
  const std::size_t n = c.size();
  std::vector<double> u = start.u;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(cols[i])] = c(i, static_cast<std::size_t>(cols[i])) - u[i];
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (int s = 0; s < sweeps && n > 1; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(cols[i]);
      double hi = inf;
      auto row = c.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != si) hi = std::min(hi, row[j] - v[j]);
      }
      double lo_slack = inf;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) lo_slack = std::min(lo_slack, c(k, si) - u[k]);
      }
      const double lo = c(i, si) - lo_slack;
      if (!(lo <= hi)) continue;
      u[i] = 0.5 * (lo + hi);
      v[si] = c(i, si) - u[i];
    }
  }
  DualPotentials out;
  out.u = std::move(u);
  out.v.assign(n, inf);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = c.row(i);
    for (std::size_t j = 0; j < n; ++j) out.v[j] = std::min(out.v[j], row[j] - out.u[i]);
  }
  return out;
}

inline constexpr double kLabelTol = 1e-9;

// Checks the label invariants: (u*, v*) feasible, M* tight within 1e-9.
inline bool LabelsValid(const LabeledInstance& inst, double tol = kLabelTol) {
  const std::size_t n = inst.c.size();
  DualPotentials d{inst.u_star, inst.v_star};
  if (!IsDualFeasible(inst.c, d, tol) || inst.optimal_cols.size() != n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(inst.optimal_cols[i]);
    if (std::abs(ReducedCost(inst.c, d.u, d.v, i, j)) > ScaledTol(tol, inst.c(i, j))) {
      return false;
    }
  }
  return true;
}

// Solves c, centers the duals inside the optimal face and gauge-fixes them.
inline LabeledInstance GenLabels(const CostMatrix& c, const PipelineConfig& cfg = {},
                                 int centering_sweeps = kDefaultCenteringSweeps) {
  auto solved = SolveCold(c);
  const auto& cols = solved.assignment.row_to_col;
  auto fixed = GaugeFix(CenterInOptimalFace(c, cols, solved.duals, centering_sweeps));
  LabeledInstance inst{c, ExtractFeatures(c, cfg), std::move(fixed.u),
                       std::move(fixed.v), cols};
  if (!LabelsValid(inst)) {
    throw Error(ErrorCode::kInvalidInput, "generated labels violate feasibility or tightness");
  }
  return inst;
}

}  // namespace dualseed

#endif  // DUALSEED_DATAGEN_HPP_
