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

// Competing row-potential seeds. Every seed is a plain vector u_hat; the
// min-trick downstream makes any of them feasible.

#ifndef DUALSEED_BASELINES_HPP_
#define DUALSEED_BASELINES_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dualseed/cost_matrix.hpp"
#include "dualseed/error.hpp"
#include "dualseed/features.hpp"
#include "dualseed/rng.hpp"
#include "dualseed/rowdualnet.hpp"

namespace dualseed {

inline std::vector<double> SeedRowMean(const CostMatrix& c) {
  std::vector<double> u(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    double s = 0.0;
    for (double x : c.row(i)) s += x;
    u[i] = s / static_cast<double>(c.size());
  }
  return u;
}

inline constexpr std::uint64_t kRandomSeedStream = 0xBA5E;

// i.i.d. U(0, 1), independent of the costs.
inline std::vector<double> SeedRandom(const CostMatrix& c, std::uint64_t seed) {
  CounterRng rng(seed, kRandomSeedStream);
  std::vector<double> u(c.size());
  for (auto& x : u) x = rng.Uniform();
  return u;
}

// u_i = w . f_i + b, shared across rows and instances.
struct LinRegWeights {
  std::vector<double> w;
  double b = 0.0;
};

inline constexpr double kDefaultRidge = 1e-8;

// Least squares over all (feature row, u*_i) pairs of the dataset, via the
// normal equations. ridge = 0 turns regularization off and surfaces a
// singular system as kSingularSystem.
inline LinRegWeights TrainLinReg(std::span<const LabeledInstance> data,
                                 double ridge = kDefaultRidge) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "no training instances");
  const std::size_t d = data.front().features.d;
  const auto dim = static_cast<Eigen::Index>(d + 1);
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd x(dim);
  for (const auto& inst : data) {
    if (inst.features.d != d) {
      throw Error(ErrorCode::kDimensionMismatch, "feature dimensions differ across instances");
    }
    if (inst.u_star.size() != inst.features.n) {
      throw Error(ErrorCode::kShapeMismatch, "labels do not match feature rows");
    }
    for (std::size_t i = 0; i < inst.features.n; ++i) {
      auto row = inst.features.row(i);
      for (std::size_t k = 0; k < d; ++k) x(static_cast<Eigen::Index>(k)) = row[k];
      x(dim - 1) = 1.0;
      xtx.selfadjointView<Eigen::Lower>().rankUpdate(x);
      xty += inst.u_star[i] * x;
    }
  }
  xtx = xtx.selfadjointView<Eigen::Lower>();
  Eigen::VectorXd sol;
  if (ridge > 0.0) {
    xtx.diagonal().array() += ridge;
    sol = xtx.ldlt().solve(xty);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (lu.rank() < dim) {
      throw Error(ErrorCode::kSingularSystem,
                  "normal equations are singular (rank " + std::to_string(lu.rank()) + " < " +
                      std::to_string(dim) + ")");
    }
    sol = lu.solve(xty);
  }
  LinRegWeights out;
  out.w.assign(sol.data(), sol.data() + d);
  out.b = sol(dim - 1);
  return out;
}

inline std::vector<double> SeedLinReg(const FeatureMatrix& f, const LinRegWeights& m) {
  if (m.w.size() != f.d) {
    throw Error(ErrorCode::kDimensionMismatch, "linear model expects " +
                                                   std::to_string(m.w.size()) + " features");
  }
  std::vector<double> u(f.n);
  for (std::size_t i = 0; i < f.n; ++i) {
    auto row = f.row(i);
    double s = m.b;
    for (std::size_t k = 0; k < f.d; ++k) s += m.w[k] * row[k];
    u[i] = s;
  }
  return u;
}

// Coordinate-wise lower median of gauge-fixed training duals.
inline std::vector<double> SeedLearnedMedian(const std::vector<std::vector<double>>& duals) {
  if (duals.empty()) throw Error(ErrorCode::kEmptyDataset, "no training duals");
  const std::size_t n = duals.front().size();
  for (const auto& d : duals) {
    if (d.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "training dual vectors differ in length");
    }
  }
  std::vector<double> out(n), column(duals.size());
  const std::size_t mid = (duals.size() - 1) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < duals.size(); ++m) column[m] = duals[m][i];
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid),
                     column.end());
    out[i] = column[mid];
  }
  return out;
}

// Applies a median vector to an instance; its size must match.
inline std::vector<double> ApplyLearnedMedian(const std::vector<double>& median,
                                              const CostMatrix& c) {
  if (median.size() != c.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "median vector has length " + std::to_string(median.size()) +
                    ", instance has n = " + std::to_string(c.size()));
  }
  return median;
}

struct SubgradientConfig {
  std::int64_t time_budget_ns = 1'000'000;
  std::optional<double> step0;               // default range(C) / 10
  std::optional<std::int64_t> max_iters;     // optional iteration cap
  bool record_history = false;

  void Validate() const {
    if (time_budget_ns <= 0) throw Error(ErrorCode::kInvalidInput, "time_budget_ns must be > 0");
    if (step0 && !(*step0 >= 0.0)) throw Error(ErrorCode::kInvalidInput, "step0 must be >= 0");
  }
};

struct DualValue {
  double g = 0.0;               // sum u + sum_j min_i (C_ij - u_i)
  std::vector<double> subgrad;  // 1 - |{j : i*(j) = i}|
};

inline DualValue EvaluateDual(const CostMatrix& c, std::span<const double> u) {
  const std::size_t n = c.size();
  std::vector<double> v(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> arg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = c.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = row[j] - u[i];
      if (s < v[j]) {
        v[j] = s;
        arg[j] = i;
      }
    }
  }
  DualValue out;
  out.subgrad.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) out.g += u[i];
  for (std::size_t j = 0; j < n; ++j) {
    out.g += v[j];
    out.subgrad[arg[j]] -= 1.0;
  }
  return out;
}

struct SubgradientResult {
  std::vector<double> u;  // best iterate
  double best_g = 0.0;
  std::int64_t iterations = 0;
  std::vector<double> history;  // best g after each evaluation, if recorded
};

// Subgradient ascent on g(u) from u0 = row minima with step
// step0 / sqrt(t), stopped by wall clock (and optionally an iteration cap).
inline SubgradientResult SeedSubgradient(const CostMatrix& c, const SubgradientConfig& cfg) {
  cfg.Validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = c.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = c.row(i);
    u[i] = *std::min_element(row.begin(), row.end());
  }
  const double step0 = cfg.step0.value_or(c.range() / 10.0);
  SubgradientResult out;
  out.u = u;
  out.best_g = -std::numeric_limits<double>::infinity();
  for (std::int64_t t = 1;; ++t) {
    auto dv = EvaluateDual(c, u);
    if (dv.g > out.best_g) {
      out.best_g = dv.g;
      out.u = u;
    }
    if (cfg.record_history) out.history.push_back(out.best_g);
    const auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    if (elapsed >= cfg.time_budget_ns) break;
    if (cfg.max_iters && out.iterations >= *cfg.max_iters) break;
    const double step = step0 / std::sqrt(static_cast<double>(t));
    for (std::size_t i = 0; i < n; ++i) u[i] += step * dv.subgrad[i];
    ++out.iterations;
  }
  return out;
}

}  // namespace dualseed

#endif  // DUALSEED_BASELINES_HPP_
