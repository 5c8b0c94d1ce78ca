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

// Exact dense linear assignment in the Jonker-Volgenant family.
//
// Both entry points share one shortest-augmenting-path core that keeps the
// row and column potentials explicit, so the search can start from any
// dual-feasible state: the classical JV initialization (SolveCold) or an
// injected warm start (SolveSeeded).

#ifndef DUALSEED_LAP_HPP_
#define DUALSEED_LAP_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dualseed/cost_matrix.hpp"
#include "dualseed/error.hpp"

namespace dualseed {

enum class ColdInit {
  // Column reduction and reduction transfer only.
  kColumnReduction,
  // Column reduction, reduction transfer and two rounds of augmenting row
  // reduction (the full classical JV initialization).
  kJonkerVolgenant,
};

struct SolverOptions {
  ColdInit cold_init = ColdInit::kColumnReduction;
  // Reduced costs at or below eq_tol count as equality edges. Augmentations
  // whose shortest path is no longer than this leave the potentials alone.
  double eq_tol = 1e-9;
  double feas_tol = kFeasTol;
};

inline constexpr const char* kPhaseInit = "init";
inline constexpr const char* kPhaseGreedy = "greedy";
inline constexpr const char* kPhaseAugment = "augment";

struct SolveStats {
  int greedy_matched = 0;
  int free_rows = 0;
  int augment_searches = 0;
  // Augmentations whose shortest path had positive length (> eq_tol), i.e.
  // the ones that had to move the potentials.
  int dual_update_steps = 0;
  std::map<std::string, std::int64_t> phase_times;  // nanoseconds

  bool SameCounters(const SolveStats& o) const {
    return greedy_matched == o.greedy_matched && free_rows == o.free_rows &&
           augment_searches == o.augment_searches &&
           dual_update_steps == o.dual_update_steps;
  }
};

struct SolveResult {
  Assignment assignment;
  DualPotentials duals;
  SolveStats stats;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t ElapsedNs(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() -
                                                              since)
      .count();
}

class SapSolver {
 public:
  SapSolver(const CostMatrix& c, const SolverOptions& opts)
      : c_(c),
        opts_(opts),
        n_(c.size()),
        u_(n_, 0.0),
        v_(n_, 0.0),
        col4row_(n_, -1),
        row4col_(n_, -1),
        spc_(n_),
        path_(n_),
        remaining_(n_) {}

  // Column reduction ("init"), then reduction transfer and, for the full JV
  // variant, two rounds of augmenting row reduction ("greedy").
  void InitCold(SolveStats& stats) {
    auto t0 = Clock::now();
    const std::size_t n = n_;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Column minima, scanned row-major; strict < keeps the lowest row index.
    std::vector<double> colmin(n, kInf);
    std::vector<int> argmin(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = c_.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (row[j] < colmin[j]) {
          colmin[j] = row[j];
          argmin[j] = static_cast<int>(i);
        }
      }
    }
    std::vector<int> matches(n, 0);
    for (std::size_t jj = n; jj-- > 0;) {
      const int imin = argmin[jj];
      v_[jj] = colmin[jj];
      if (matches[imin]++ == 0) {
        col4row_[imin] = static_cast<int>(jj);
        row4col_[jj] = imin;
      } else if (v_[jj] < v_[col4row_[imin]]) {
        const int j1 = col4row_[imin];
        col4row_[imin] = static_cast<int>(jj);
        row4col_[jj] = imin;
        row4col_[j1] = -1;
      } else {
        row4col_[jj] = -1;
      }
    }

    stats.phase_times[kPhaseInit] = ElapsedNs(t0);

    // Reduction transfer from uniquely matched rows.
    auto t1 = Clock::now();
    free_.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (matches[i] == 0) {
        free_.push_back(static_cast<int>(i));
      } else if (matches[i] == 1 && n > 1) {
        const int j1 = col4row_[i];
        auto row = c_.row(i);
        double m = kInf;
        for (std::size_t j = 0; j < n; ++j) {
          if (static_cast<int>(j) != j1) m = std::min(m, row[j] - v_[j]);
        }
        v_[j1] -= m;
      }
    }
    if (opts_.cold_init == ColdInit::kJonkerVolgenant) AugmentingRowReduction();
    stats.phase_times[kPhaseGreedy] = ElapsedNs(t1);

    // Row potentials consistent with the reduced state: u_i = min_j (C_ij -
    // v_j), which is the implicit JV row price for matched and free rows.
    for (std::size_t i = 0; i < n; ++i) {
      auto row = c_.row(i);
      double m = kInf;
      for (std::size_t j = 0; j < n; ++j) m = std::min(m, row[j] - v_[j]);
      u_[i] = m;
    }
  }

  // Injects a dual-feasible seed, then one greedy pass over the rows in
  // index order along equality edges. No reduction transfer is applied.
  void InitSeeded(const DualPotentials& seed, SolveStats& stats) {
    auto t0 = Clock::now();
    const std::size_t n = n_;
    if (seed.u.size() != n || seed.v.size() != n) {
      throw Error(ErrorCode::kShapeMismatch,
                  "seed potentials must have length " + std::to_string(n));
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(seed.u[k]) || !std::isfinite(seed.v[k])) {
        throw Error(ErrorCode::kNonFinite, "seed potential is not finite");
      }
    }
    u_ = seed.u;
    v_ = seed.v;
    // Feasibility check; within-tolerance violations are absorbed by
    // lowering v_j onto the column minimum so the search sees r >= 0.
    std::vector<double> colmin(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      auto row = c_.row(i);
      const double ui = u_[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double slack = row[j] - ui;
        if (slack - v_[j] < -ScaledTol(opts_.feas_tol, row[j])) {
          throw Error(ErrorCode::kInfeasibleSeed,
                      "u[" + std::to_string(i) + "] + v[" + std::to_string(j) +
                          "] exceeds C[" + std::to_string(i) + "][" +
                          std::to_string(j) + "]");
        }
        colmin[j] = std::min(colmin[j], slack);
      }
    }
    for (std::size_t j = 0; j < n; ++j) v_[j] = std::min(v_[j], colmin[j]);
    stats.phase_times[kPhaseInit] = ElapsedNs(t0);

    auto t1 = Clock::now();
    free_.clear();
    for (std::size_t i = 0; i < n; ++i) {
      auto row = c_.row(i);
      const double ui = u_[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (row4col_[j] == -1 && (row[j] - ui) - v_[j] <= opts_.eq_tol) {
          row4col_[j] = static_cast<int>(i);
          col4row_[i] = static_cast<int>(j);
          break;
        }
      }
      if (col4row_[i] == -1) free_.push_back(static_cast<int>(i));
    }
    stats.phase_times[kPhaseGreedy] = ElapsedNs(t1);
  }

  void AugmentAll(SolveStats& stats) {
    auto t0 = Clock::now();
    stats.free_rows = static_cast<int>(free_.size());
    stats.greedy_matched = static_cast<int>(n_) - stats.free_rows;
    for (int row : free_) {
      ++stats.augment_searches;
      if (Augment(row)) ++stats.dual_update_steps;
    }
    // Rounding in the potential updates can leave r_ij a few ulps below
    // zero; pull each v_j down onto its column minimum.
    std::vector<double> colmin(n_, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n_; ++i) {
      auto row = c_.row(i);
      const double ui = u_[i];
      for (std::size_t j = 0; j < n_; ++j) {
        colmin[j] = std::min(colmin[j], row[j] - ui);
      }
    }
    for (std::size_t j = 0; j < n_; ++j) v_[j] = std::min(v_[j], colmin[j]);
    stats.phase_times[kPhaseAugment] = ElapsedNs(t0);
  }

  SolveResult Finish(SolveStats stats) const {
    SolveResult out;
    out.assignment.row_to_col = col4row_;
    out.assignment.total_cost = AssignmentCost(c_, col4row_);
    out.duals.u = u_;
    out.duals.v = v_;
    out.stats = std::move(stats);
    return out;
  }

 private:
  void AugmentingRowReduction() {
    const std::size_t n = n_;
    if (n == 1) {
      if (!free_.empty()) {
        col4row_[0] = 0;
        row4col_[0] = 0;
        free_.clear();
      }
      return;
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // Guards against long ping-pong on near-degenerate floating costs.
    const std::size_t step_cap = 64 * n + 1024;
    for (int round = 0; round < 2; ++round) {
      std::size_t k = 0;
      const std::size_t prev_free = free_.size();
      std::size_t num_free = 0;
      std::size_t steps = 0;
      while (k < prev_free) {
        if (++steps > step_cap) {
          RebuildFreeList();
          return;
        }
        const int i = free_[k++];
        auto row = c_.row(static_cast<std::size_t>(i));
        double umin = row[0] - v_[0];
        double usubmin = kInf;
        int j1 = 0;
        int j2 = -1;
        for (std::size_t j = 1; j < n; ++j) {
          const double h = row[j] - v_[j];
          if (h < usubmin) {
            if (h >= umin) {
              usubmin = h;
              j2 = static_cast<int>(j);
            } else {
              usubmin = umin;
              umin = h;
              j2 = j1;
              j1 = static_cast<int>(j);
            }
          }
        }
        int i0 = row4col_[j1];
        const bool strict = umin < usubmin;
        if (strict) {
          v_[j1] -= usubmin - umin;
        } else if (i0 >= 0) {
          j1 = j2;
          i0 = row4col_[j2];
        }
        col4row_[i] = j1;
        row4col_[j1] = i;
        if (i0 >= 0) {
          col4row_[i0] = -1;
          if (strict) {
            free_[--k] = i0;
          } else {
            free_[num_free++] = i0;
          }
        }
      }
      free_.resize(num_free);
    }
  }

  void RebuildFreeList() {
    free_.clear();
    for (std::size_t i = 0; i < n_; ++i) {
      if (col4row_[i] == -1) free_.push_back(static_cast<int>(i));
    }
  }

  // Dijkstra over reduced costs from free row `cur` to the nearest free
  // column, then potential update and augmentation. Returns true when the
  // shortest path had positive length.
  bool Augment(int cur) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const std::size_t n = n_;
    std::fill(spc_.begin(), spc_.end(), kInf);
    std::iota(remaining_.begin(), remaining_.end(), 0);
    sr_rows_.clear();
    sc_cols_.clear();
    std::size_t num_remaining = n;
    double min_val = 0.0;
    int i = cur;
    int sink = -1;
    while (sink == -1) {
      sr_rows_.push_back(i);
      auto row = c_.row(static_cast<std::size_t>(i));
      const double ui = u_[i];
      double lowest = kInf;
      std::size_t index = n;
      int best_j = static_cast<int>(n);
      for (std::size_t it = 0; it < num_remaining; ++it) {
        const int j = remaining_[it];
        const double r = min_val + ((row[j] - ui) - v_[j]);
        if (r < spc_[j]) {
          path_[j] = i;
          spc_[j] = r;
        }
        if (spc_[j] < lowest || (spc_[j] == lowest && j < best_j)) {
          lowest = spc_[j];
          index = it;
          best_j = j;
        }
      }
      if (index == n || lowest == kInf) {
        throw Error(ErrorCode::kInvalidInput, "no augmenting path exists");
      }
      min_val = lowest;
      const int j = remaining_[index];
      sc_cols_.push_back(j);
      remaining_[index] = remaining_[--num_remaining];
      if (row4col_[j] == -1) {
        sink = j;
      } else {
        i = row4col_[j];
      }
    }

    const bool moved = min_val > opts_.eq_tol;
    if (moved) {
      u_[cur] += min_val;
      for (int r : sr_rows_) {
        if (r != cur) u_[r] += min_val - spc_[col4row_[r]];
      }
      for (int col : sc_cols_) v_[col] -= min_val - spc_[col];
    }

    int j = sink;
    while (true) {
      const int r = path_[j];
      row4col_[j] = r;
      std::swap(col4row_[r], j);
      if (r == cur) break;
    }
    return moved;
  }

  const CostMatrix& c_;
  SolverOptions opts_;
  std::size_t n_;
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<int> col4row_;
  std::vector<int> row4col_;
  std::vector<int> free_;
  std::vector<double> spc_;
  std::vector<int> path_;
  std::vector<int> remaining_;
  std::vector<int> sr_rows_;
  std::vector<int> sc_cols_;
};

}  // namespace detail

// Cold start: JV-style reduction initialization followed by shortest
// augmenting paths. Optimal assignment plus feasible, complementary-slack duals.
inline SolveResult SolveCold(const CostMatrix& c,
                             const SolverOptions& opts = {}) {
  if (c.empty()) throw Error(ErrorCode::kInvalidInput, "empty cost matrix");
  SolveStats stats;
  detail::SapSolver solver(c, opts);
  solver.InitCold(stats);
  solver.AugmentAll(stats);
  return solver.Finish(std::move(stats));
}

// Warm start from caller-supplied potentials. Throws kInfeasibleSeed when
// u_i + v_j > C_ij beyond tolerance anywhere.
inline SolveResult SolveSeeded(const CostMatrix& c, const DualPotentials& seed,
                               const SolverOptions& opts = {}) {
  if (c.empty()) throw Error(ErrorCode::kInvalidInput, "empty cost matrix");
  SolveStats stats;
  detail::SapSolver solver(c, opts);
  solver.InitSeeded(seed, stats);
  solver.AugmentAll(stats);
  return solver.Finish(std::move(stats));
}

enum class CertificateReason {
  kOk,
  kShapeMismatch,
  kInfeasibleDual,
  kNotPermutation,
  kSlacknessViolated,
};

struct Certificate {
  bool ok = false;
  CertificateReason reason = CertificateReason::kShapeMismatch;
  explicit operator bool() const { return ok; }
};

// Optimality certificate: feasible duals, a bijection, and every assigned
// edge tight within tol * max(1, |C_ij|).
inline Certificate VerifyCertificate(const CostMatrix& c, const Assignment& a,
                                     const DualPotentials& d,
                                     double tol = kFeasTol) {
  const std::size_t n = c.size();
  if (d.u.size() != n || d.v.size() != n || a.row_to_col.size() != n) {
    return {false, CertificateReason::kShapeMismatch};
  }
  if (CountFeasibilityViolations(c, d, tol) != 0) {
    return {false, CertificateReason::kInfeasibleDual};
  }
  if (!IsPermutation(a.row_to_col, n)) {
    return {false, CertificateReason::kNotPermutation};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(a.row_to_col[i]);
    if (std::abs(ReducedCost(c, d.u, d.v, i, j)) > ScaledTol(tol, c(i, j))) {
      return {false, CertificateReason::kSlacknessViolated};
    }
  }
  return {true, CertificateReason::kOk};
}

inline constexpr std::size_t kBruteForceMaxN = 10;

// Exhaustive minimum over all n! permutations (n <= 10). Ties go to the
// lexicographically smallest permutation.
inline Assignment BruteForce(const CostMatrix& c) {
  const std::size_t n = c.size();
  if (n > kBruteForceMaxN) {
    throw Error(ErrorCode::kTooLarge,
                "brute force limited to n <= 10, got " + std::to_string(n));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best{perm, AssignmentCost(c, perm)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double cost = AssignmentCost(c, perm);
    if (cost < best.total_cost) best = {perm, cost};
  }
  return best;
}

}  // namespace dualseed

#endif  // DUALSEED_LAP_HPP_
