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

// Instance and seed generators shared by the unit and acceptance suites.

#ifndef DUALSEED_TESTS_TEST_UTIL_HPP_
#define DUALSEED_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "dualseed/cost_matrix.hpp"
#include "dualseed/rng.hpp"

namespace dualseed::testing {

inline CostMatrix RandomIntMatrix(std::size_t n, CounterRng& rng, int lo = 0,
                                  int hi = 20) {
  std::vector<double> vals(n * n);
  for (auto& x : vals) {
    x = lo + static_cast<double>(rng.Below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  return CostMatrix(n, std::move(vals));
}

inline CostMatrix RandomUniformMatrix(std::size_t n, CounterRng& rng,
                                      double lo = 0.0, double hi = 1.0) {
  std::vector<double> vals(n * n);
  for (auto& x : vals) x = rng.Uniform(lo, hi);
  return CostMatrix(n, std::move(vals));
}

// Random dual-feasible seed: arbitrary u, then v_j = min_i (C_ij - u_i) minus
// a random non-negative slack (zero slack on roughly half the columns).
inline DualPotentials RandomFeasibleSeed(const CostMatrix& c, CounterRng& rng,
                                         double spread) {
  const std::size_t n = c.size();
  DualPotentials d;
  d.u.resize(n);
  d.v.assign(n, std::numeric_limits<double>::infinity());
  for (auto& x : d.u) x = rng.Uniform(-spread, spread);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d.v[j] = std::min(d.v[j], c(i, j) - d.u[i]);
    }
  }
  for (auto& x : d.v) {
    if (rng.Uniform() < 0.5) x -= rng.Uniform(0.0, spread);
  }
  return d;
}

}  // namespace dualseed::testing

#endif  // DUALSEED_TESTS_TEST_UTIL_HPP_
