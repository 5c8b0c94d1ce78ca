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

#ifndef DUALSEED_PIPELINE_CONFIG_HPP_
#define DUALSEED_PIPELINE_CONFIG_HPP_

#include <string>

#include "dualseed/error.hpp"

namespace dualseed {

struct PipelineConfig {
  double eps = 1e-5;     // equality tolerance for the density gate
  double tau = 1.2;      // fallback threshold on the density
  double eq_tol = 1e-9;  // solver-internal equality tolerance
  int refine_k = 16;     // top-K columns inspected by the refine stage
  int feature_k = 10;    // k for the k-smallest-cost features
  int feature_dim = 21;  // 4, 13 or 21

  void Validate() const {
    if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidInput, "eps must be > 0");
    if (!(tau >= 0.0)) throw Error(ErrorCode::kInvalidInput, "tau must be >= 0");
    if (refine_k < 1) throw Error(ErrorCode::kInvalidInput, "refine_k must be >= 1");
    if (feature_k < 1) {
      throw Error(ErrorCode::kInvalidInput, "feature_k must be >= 1");
    }
    if (feature_dim != 4 && feature_dim != 13 && feature_dim != 21) {
      throw Error(ErrorCode::kInvalidInput,
                  "feature_dim must be 4, 13 or 21, got " +
                      std::to_string(feature_dim));
    }
  }
};

}  // namespace dualseed

#endif  // DUALSEED_PIPELINE_CONFIG_HPP_
