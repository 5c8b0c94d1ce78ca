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

// End-to-end warm start: features -> model -> min-trick -> density gate ->
// seeded (or cold) solve, with wall-clock time per stage.

#ifndef DUALSEED_WARMSTART_HPP_
#define DUALSEED_WARMSTART_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dualseed/cost_matrix.hpp"
#include "dualseed/features.hpp"
#include "dualseed/lap.hpp"
#include "dualseed/min_trick.hpp"
#include "dualseed/pipeline_config.hpp"
#include "dualseed/rowdualnet.hpp"

namespace dualseed {

inline constexpr const char* kStageFeatures = "features";
inline constexpr const char* kStageModel = "model";
inline constexpr const char* kStageMinTrick = "min_trick";
inline constexpr const char* kStageFallbackCheck = "fallback_check";
inline constexpr const char* kStageSolver = "solver";
inline constexpr const char* kStageNames[] = {kStageFeatures, kStageModel, kStageMinTrick,
                                              kStageFallbackCheck, kStageSolver};

struct PipelineReport {
  std::map<std::string, std::int64_t> stage_times;  // nanoseconds
  double density_rho = 0.0;
  bool fallback_triggered = false;
  SolveStats solve_stats;
  double total_cost = 0.0;

  std::int64_t TotalNs() const {
    std::int64_t t = 0;
    for (const auto& [name, ns] : stage_times) t += ns;
    return t;
  }
  // Everything except the solver.
  std::int64_t OverheadNs() const {
    auto it = stage_times.find(kStageSolver);
    return TotalNs() - (it == stage_times.end() ? 0 : it->second);
  }
};

struct WarmResult {
  Assignment assignment;
  DualPotentials duals;
  PipelineReport report;
};

// Stopwatch that charges elapsed time to named stages.
class StageTimer {
 public:
  explicit StageTimer(PipelineReport& report) : report_(report) {}
  void Restart() { start_ = detail::Clock::now(); }
  void Charge(const char* stage) {
    report_.stage_times[stage] += detail::ElapsedNs(start_);
    start_ = detail::Clock::now();
  }

 private:
  PipelineReport& report_;
  detail::Clock::time_point start_ = detail::Clock::now();
};

// Shared tail of every row-seed strategy: min-trick, density gate, solve.
// Stages already present in `report` (features/model) are kept.
inline WarmResult SolveFromRowSeed(const CostMatrix& c, std::span<const double> u_hat,
                                   const PipelineConfig& cfg, PipelineReport report = {}) {
  cfg.Validate();
  StageTimer timer(report);
  auto mt = MinTrick(c, u_hat);
  timer.Charge(kStageMinTrick);
  // Second O(n^2) sweep: v must be complete before any reduced cost is final.
  report.density_rho = EqualityDensity(c, mt.duals, cfg.eps);
  report.fallback_triggered = report.density_rho < cfg.tau;
  timer.Charge(kStageFallbackCheck);
  SolverOptions opts;
  opts.eq_tol = cfg.eq_tol;
  auto solved = report.fallback_triggered ? SolveCold(c, opts)
                                          : SolveSeeded(c, mt.duals, opts);
  timer.Charge(kStageSolver);
  report.solve_stats = solved.stats;
  report.total_cost = solved.assignment.total_cost;
  for (const char* stage : kStageNames) report.stage_times.try_emplace(stage, 0);
  return {std::move(solved.assignment), std::move(solved.duals), std::move(report)};
}

inline WarmResult WarmSolve(const CostMatrix& c, const ModelParams& model,
                            const PipelineConfig& cfg) {
  cfg.Validate();
  if (model.config.input_dim != cfg.feature_dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "model input dim " + std::to_string(model.config.input_dim) +
                    " != pipeline feature dim " + std::to_string(cfg.feature_dim));
  }
  PipelineReport report;
  StageTimer timer(report);
  auto features = ExtractFeatures(c, cfg);
  timer.Charge(kStageFeatures);
  auto u_hat = Forward(model, features, c);
  timer.Charge(kStageModel);
  return SolveFromRowSeed(c, u_hat, cfg, std::move(report));
}

}  // namespace dualseed

#endif  // DUALSEED_WARMSTART_HPP_
