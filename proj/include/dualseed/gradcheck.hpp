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

// Central finite-difference check of the RowDualNet gradient. The loss is
// piecewise smooth, so coordinates whose probes cross a kink are skipped.

#ifndef DUALSEED_GRADCHECK_HPP_
#define DUALSEED_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "dualseed/rowdualnet.hpp"

namespace dualseed {

// Everything that decides which linear piece the loss is on: ReLU masks,
// MAE signs, min-trick argmins and active slackness terms.
inline std::vector<int> PieceSignature(const ModelParams& p, const LabeledInstance& inst,
                                       double lambda) {
  ForwardCache fc;
  auto u = Forward(p, inst.features, inst.c, &fc);
  std::vector<int> sig;
  for (const auto& pre : fc.pre) {
    for (Eigen::Index k = 0; k < pre.size(); ++k) sig.push_back(pre.data()[k] > 0.0);
  }
  auto loss = Loss(u, inst, lambda);
  for (std::size_t i = 0; i < u.size(); ++i) {
    sig.push_back(u[i] > inst.u_star[i] ? 1 : u[i] < inst.u_star[i] ? -1 : 0);
  }
  sig.insert(sig.end(), loss.argmin.begin(), loss.argmin.end());
  auto mt = MinTrick(inst.c, u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto j = static_cast<std::size_t>(inst.optimal_cols[i]);
    sig.push_back(ReducedCost(inst.c, mt.duals.u, mt.duals.v, i, j) > 0.0);
  }
  return sig;
}

struct GradCheck {
  double max_rel_error = 0.0;
  int checked = 0;
  int skipped = 0;
};

// Relative error |fd - analytic| / max(|fd|, |analytic|, floor) over every
// parameter.
inline GradCheck CheckGradient(ModelParams p, const LabeledInstance& inst, double lambda,
                               double step = 1e-5, double floor = 1e-6) {
  auto loss_at = [&] { return Loss(Forward(p, inst.features, inst.c), inst, lambda).value; };
  auto analytic = ComputeGradient(p, inst, lambda).grad;
  const auto base_sig = PieceSignature(p, inst, lambda);
  GradCheck out;
  auto tensors = p.Tensors();
  auto grads = analytic.Tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    for (std::size_t k = 0; k < tensors[t].size(); ++k) {
      double& w = tensors[t].data[k];
      const double saved = w;
      w = saved + step;
      const double up = loss_at();
      const bool same_up = PieceSignature(p, inst, lambda) == base_sig;
      w = saved - step;
      const double down = loss_at();
      const bool same_down = PieceSignature(p, inst, lambda) == base_sig;
      w = saved;
      if (!same_up || !same_down) {
        ++out.skipped;
        continue;
      }
      const double fd = (up - down) / (2 * step);
      const double an = grads[t].data[k];
      const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), floor});
      out.max_rel_error = std::max(out.max_rel_error, rel);
      ++out.checked;
    }
  }
  return out;
}

}  // namespace dualseed

#endif  // DUALSEED_GRADCHECK_HPP_
