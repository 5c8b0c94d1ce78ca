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

// Constructive dual feasibility: given any row potentials u, the column
// potentials v_j = min_i (C_ij - u_i) make (u, v) feasible, with at least one
// tight edge per column.

#ifndef DUALSEED_MIN_TRICK_HPP_
#define DUALSEED_MIN_TRICK_HPP_

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dualseed/cost_matrix.hpp"
#include "dualseed/error.hpp"

namespace dualseed {

struct MinTrickResult {
  DualPotentials duals;
  // Lowest row index attaining each column minimum.
  std::vector<int> argmin;
};

inline MinTrickResult MinTrick(const CostMatrix& c, std::span<const double> u_hat) {
  const std::size_t n = c.size();
  if (u_hat.size() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                "u_hat has length " + std::to_string(u_hat.size()) +
                    ", expected " + std::to_string(n));
  }
  MinTrickResult out;
  out.duals.u.assign(u_hat.begin(), u_hat.end());
  out.duals.v.assign(n, std::numeric_limits<double>::infinity());
  out.argmin.assign(n, 0);
  auto& v = out.duals.v;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u_hat[i])) {
      throw Error(ErrorCode::kNonFinite, "u_hat[" + std::to_string(i) + "] is not finite");
    }
    auto row = c.row(i);
    const double ui = u_hat[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double slack = row[j] - ui;
      if (slack < v[j]) {
        v[j] = slack;
        out.argmin[j] = static_cast<int>(i);
      }
    }
  }
  return out;
}

// Average degree of the equality subgraph: #{(i, j) : |r_ij| < eps} / n.
inline double EqualityDensity(const CostMatrix& c, const DualPotentials& d,
                              double eps) {
  const std::size_t n = c.size();
  if (d.u.size() != n || d.v.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "potentials do not match matrix size");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = c.row(i);
    const double ui = d.u[i];
    for (std::size_t j = 0; j < n; ++j) {
      count += std::abs((row[j] - ui) - d.v[j]) < eps ? 1 : 0;
    }
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace dualseed

#endif  // DUALSEED_MIN_TRICK_HPP_
