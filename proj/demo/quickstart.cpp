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

// Solves one instance cold, then warm-started from a small model trained on
// a handful of labeled instances, and checks the two agree.

#include <cstdio>
#include <vector>

#include "dualseed/datagen.hpp"
#include "dualseed/train.hpp"
#include "dualseed/warmstart.hpp"

int main() {
  using namespace dualseed;
  constexpr std::size_t kN = 64;

  std::vector<LabeledInstance> data;
  for (std::uint64_t s = 0; s < 16; ++s) data.push_back(GenLabels(GenDense(kN, 100 + s)));

  TrainConfig tc;
  tc.epochs = 20;
  ModelConfig mc;
  mc.hidden_dim = 32;
  auto model = Train(data, tc, mc).best_params;

  const CostMatrix c = GenDense(kN, 7);
  auto cold = SolveCold(c);
  PipelineConfig cfg;
  cfg.tau = 0.0;  // always use the seed
  auto warm = WarmSolve(c, model, cfg);

  std::printf("cold: cost %.12f, dual updates %lld, greedy %lld/%zu\n", cold.assignment.total_cost,
              static_cast<long long>(cold.stats.dual_update_steps),
              static_cast<long long>(cold.stats.greedy_matched), kN);
  std::printf("warm: cost %.12f, dual updates %lld, greedy %lld/%zu, rho %.4f\n",
              warm.report.total_cost,
              static_cast<long long>(warm.report.solve_stats.dual_update_steps),
              static_cast<long long>(warm.report.solve_stats.greedy_matched), kN,
              warm.report.density_rho);
  for (const char* stage : kStageNames) {
    std::printf("  %-15s %8.3f ms\n", stage, warm.report.stage_times.at(stage) / 1e6);
  }
  const bool ok = VerifyCertificate(c, warm.assignment, warm.duals).ok &&
                  warm.report.total_cost == cold.assignment.total_cost;
  std::printf("certificate and cost match: %s\n", ok ? "yes" : "no");
  return ok ? 0 : 1;
}
