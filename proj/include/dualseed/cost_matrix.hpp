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

// Value types shared by every stage: the dense cost matrix, dual potentials
// and the primal assignment.

#ifndef DUALSEED_COST_MATRIX_HPP_
#define DUALSEED_COST_MATRIX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dualseed/error.hpp"

namespace dualseed {

// Default tolerance for dual feasibility and complementary slackness. Checks
// scale it by max(1, |C_ij|) so large-magnitude costs are not held to an
// absolute 1e-9.
inline constexpr double kFeasTol = 1e-9;

// Dense n x n cost matrix stored row-major. Entries are always finite;
// forbidden edges carry a finite sentinel value recorded alongside.
class CostMatrix {
 public:
  CostMatrix() = default;

  CostMatrix(std::size_t n, std::vector<double> values,
             std::optional<double> sentinel = std::nullopt)
      : n_(n), values_(std::move(values)), sentinel_(sentinel) {
    if (n_ == 0) throw Error(ErrorCode::kInvalidInput, "cost matrix has n = 0");
    if (values_.size() != n_ * n_) {
      throw Error(ErrorCode::kShapeMismatch,
                  "expected " + std::to_string(n_ * n_) + " entries, got " +
                      std::to_string(values_.size()));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (!std::isfinite(values_[k])) {
        throw Error(ErrorCode::kNonFinite,
                    "entry (" + std::to_string(k / n_) + "," +
                        std::to_string(k % n_) + ") is not finite");
      }
    }
    if (sentinel_ && !std::isfinite(*sentinel_)) {
      throw Error(ErrorCode::kNonFinite, "sentinel is not finite");
    }
  }

  static CostMatrix FromRows(
      std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t n = rows.size();
    std::vector<double> values;
    values.reserve(n * n);
    for (const auto& row : rows) {
      if (row.size() != n) {
        throw Error(ErrorCode::kShapeMismatch, "cost matrix must be square");
      }
      values.insert(values.end(), row.begin(), row.end());
    }
    return CostMatrix(n, std::move(values));
  }

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * n_ + j];
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * n_, n_};
  }
  std::span<const double> values() const noexcept { return values_; }

  const std::optional<double>& sentinel() const noexcept { return sentinel_; }

  bool is_masked(std::size_t i, std::size_t j) const noexcept {
    return sentinel_ && (*this)(i, j) == *sentinel_;
  }

  double min_value() const {
    return *std::min_element(values_.begin(), values_.end());
  }
  double max_value() const {
    return *std::max_element(values_.begin(), values_.end());
  }
  double range() const { return max_value() - min_value(); }
  double max_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
  }

  // Range over real (non-sentinel) edges.
  double real_range() const {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (sentinel_ && values_[k] == *sentinel_) continue;
      if (first) {
        lo = hi = values_[k];
        first = false;
      } else {
        lo = std::min(lo, values_[k]);
        hi = std::max(hi, values_[k]);
      }
    }
    return hi - lo;
  }

  friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
  std::optional<double> sentinel_;
};

// Row potentials u and column potentials v.
struct DualPotentials {
  std::vector<double> u;
  std::vector<double> v;

  double objective() const {
    double s = 0.0;
    for (double x : u) s += x;
    for (double x : v) s += x;
    return s;
  }

  friend bool operator==(const DualPotentials&, const DualPotentials&) = default;
};

struct Assignment {
  std::vector<int> row_to_col;
  double total_cost = 0.0;
};

// r_ij, always evaluated in this order so that a column potential built as
// min_i (C_ij - u_i) gives an exact zero on its argmin entry.
inline double ReducedCost(const CostMatrix& c, std::span<const double> u,
                          std::span<const double> v, std::size_t i,
                          std::size_t j) noexcept {
  return (c(i, j) - u[i]) - v[j];
}

inline double ScaledTol(double tol, double cost) noexcept {
  return tol * std::max(1.0, std::abs(cost));
}

// Sum of C[i][perm[i]]. The terms are added in ascending order so the
// result does not depend on how rows are numbered.
inline double AssignmentCost(const CostMatrix& c, std::span<const int> perm) {
  std::vector<double> terms(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    terms[i] = c(i, static_cast<std::size_t>(perm[i]));
  }
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

inline bool IsPermutation(std::span<const int> perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (int j : perm) {
    if (j < 0 || static_cast<std::size_t>(j) >= n || seen[j]) return false;
    seen[j] = 1;
  }
  return true;
}

// Number of entries with u_i + v_j > C_ij + tol * max(1, |C_ij|).
inline std::size_t CountFeasibilityViolations(const CostMatrix& c,
                                              const DualPotentials& d,
                                              double tol = kFeasTol) {
  const std::size_t n = c.size();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (ReducedCost(c, d.u, d.v, i, j) < -ScaledTol(tol, c(i, j))) ++bad;
    }
  }
  return bad;
}

inline bool IsDualFeasible(const CostMatrix& c, const DualPotentials& d,
                           double tol = kFeasTol) {
  return d.u.size() == c.size() && d.v.size() == c.size() &&
         CountFeasibilityViolations(c, d, tol) == 0;
}

}  // namespace dualseed

#endif  // DUALSEED_COST_MATRIX_HPP_
