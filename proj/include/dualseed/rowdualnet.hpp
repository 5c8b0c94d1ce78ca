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

// Row-independent dual predictor.
//
// Each row's feature vector goes through a shared residual MLP to a hidden
// state and a first estimate u_init (via the output head). The refine stage
// then looks at the K smallest pseudo-reduced costs C_ij - u_init_i of the
// row, projects them into the hidden space, adds them to the hidden state,
// and the same output head emits the final u_i. Rows never exchange
// messages; the only cross-row coupling is through the shared weights.
//
// Activations are stored column-per-row (H x n) so every layer is a single
// matrix product over the instance.

#ifndef DUALSEED_ROWDUALNET_HPP_
#define DUALSEED_ROWDUALNET_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dualseed/cost_matrix.hpp"
#include "dualseed/error.hpp"
#include "dualseed/features.hpp"
#include "dualseed/min_trick.hpp"
#include "dualseed/rng.hpp"

namespace dualseed {

inline constexpr std::uint32_t kModelVersion = 1;
inline constexpr double kLayerNormEps = 1e-5;

enum class Activation : std::uint8_t { kRelu = 0 };

// How the K selected pseudo-reduced costs enter the refine projection.
enum class RefinePooling : std::uint8_t {
  kSortedValues = 0,  // all K values, ascending
  kMean = 1,
  kMax = 2,
};

struct ModelConfig {
  int input_dim = kFullFeatureDim;
  int hidden_dim = 192;
  int num_blocks = 3;
  int refine_k = 16;
  Activation activation = Activation::kRelu;
  RefinePooling pooling = RefinePooling::kSortedValues;

  int RefineWidth() const {
    return pooling == RefinePooling::kSortedValues ? refine_k : 1;
  }
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct ResidualBlock {
  Eigen::VectorXd ln_gain, ln_bias;
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

// Named view of one parameter tensor (column-major storage).
struct TensorView {
  std::string name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;
  std::size_t size() const { return static_cast<std::size_t>(rows * cols); }
  std::span<double> span() const { return {data, size()}; }
};

struct ModelParams {
  ModelConfig config;
  std::uint32_t version = kModelVersion;
  Eigen::MatrixXd w_in;  // H x d
  Eigen::VectorXd b_in;
  std::vector<ResidualBlock> blocks;
  Eigen::MatrixXd w_ref;  // H x refine width
  Eigen::VectorXd b_ref;
  Eigen::VectorXd w_out;  // H
  Eigen::VectorXd b_out;  // 1

  static ModelParams Zeros(const ModelConfig& cfg) {
    const Eigen::Index h = cfg.hidden_dim;
    if (cfg.input_dim < 1 || cfg.hidden_dim < 1 || cfg.num_blocks < 0 ||
        cfg.refine_k < 1) {
      throw Error(ErrorCode::kShapeMismatch, "invalid model configuration");
    }
    ModelParams p;
    p.config = cfg;
    p.w_in = Eigen::MatrixXd::Zero(h, cfg.input_dim);
    p.b_in = Eigen::VectorXd::Zero(h);
    p.blocks.resize(static_cast<std::size_t>(cfg.num_blocks));
    for (auto& b : p.blocks) {
      b.ln_gain = Eigen::VectorXd::Zero(h);
      b.ln_bias = Eigen::VectorXd::Zero(h);
      b.w1 = Eigen::MatrixXd::Zero(h, h);
      b.b1 = Eigen::VectorXd::Zero(h);
      b.w2 = Eigen::MatrixXd::Zero(h, h);
      b.b2 = Eigen::VectorXd::Zero(h);
    }
    p.w_ref = Eigen::MatrixXd::Zero(h, cfg.RefineWidth());
    p.b_ref = Eigen::VectorXd::Zero(h);
    p.w_out = Eigen::VectorXd::Zero(h);
    p.b_out = Eigen::VectorXd::Zero(1);
    return p;
  }

  // He-style initialization; residual branches and the head start small.
  static ModelParams Init(const ModelConfig& cfg, std::uint64_t seed) {
    ModelParams p = Zeros(cfg);
    CounterRng rng(seed, 0x5EED);
    auto fill = [&rng](auto& m, double sd) {
      for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = sd * rng.Normal();
    };
    const double h = cfg.hidden_dim;
    fill(p.w_in, std::sqrt(2.0 / cfg.input_dim));
    for (auto& b : p.blocks) {
      b.ln_gain.setOnes();
      fill(b.w1, std::sqrt(2.0 / h));
      fill(b.w2, std::sqrt(1.0 / h) / std::sqrt(std::max(1, cfg.num_blocks)));
    }
    fill(p.w_ref, std::sqrt(1.0 / cfg.RefineWidth()) * 0.5);
    fill(p.w_out, 0.1 / std::sqrt(h));
    return p;
  }

  std::vector<TensorView> Tensors() {
    std::vector<TensorView> out;
    auto add = [&out](std::string name, auto& m) {
      out.push_back({std::move(name), m.data(), m.rows(), m.cols()});
    };
    add("input.weight", w_in);
    add("input.bias", b_in);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const std::string pre = "blocks." + std::to_string(k) + ".";
      add(pre + "ln.gain", blocks[k].ln_gain);
      add(pre + "ln.bias", blocks[k].ln_bias);
      add(pre + "fc1.weight", blocks[k].w1);
      add(pre + "fc1.bias", blocks[k].b1);
      add(pre + "fc2.weight", blocks[k].w2);
      add(pre + "fc2.bias", blocks[k].b2);
    }
    add("refine.weight", w_ref);
    add("refine.bias", b_ref);
    add("head.weight", w_out);
    add("head.bias", b_out);
    return out;
  }

  std::vector<TensorView> Tensors() const {
    return const_cast<ModelParams*>(this)->Tensors();
  }

  std::size_t NumParameters() const {
    std::size_t total = 0;
    for (const auto& t : Tensors()) total += t.size();
    return total;
  }

  bool AllFinite() const {
    for (const auto& t : Tensors()) {
      for (double x : t.span()) {
        if (!std::isfinite(x)) return false;
      }
    }
    return true;
  }
};

// Labeled training instance: gauge-fixed optimal duals and the optimal
// assignment of one cost matrix.
struct LabeledInstance {
  CostMatrix c;
  FeatureMatrix features;
  std::vector<double> u_star;
  std::vector<double> v_star;
  std::vector<int> optimal_cols;  // M* = {(i, optimal_cols[i])}
};

// K smallest entries of every row, ascending, padded with the largest
// selected value when n < K. Depends only on C: subtracting the per-row
// constant u_init does not change which columns are selected.
inline Eigen::MatrixXd TopKCosts(const CostMatrix& c, int k) {
  const std::size_t n = c.size();
  const auto kk = static_cast<std::size_t>(k);
  const std::size_t take = std::min(kk, n);
  Eigen::MatrixXd out(k, static_cast<Eigen::Index>(n));
  std::vector<double> buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = c.row(i);
    std::copy(row.begin(), row.end(), buf.begin());
    std::partial_sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(take), buf.end());
    for (std::size_t r = 0; r < kk; ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) =
          buf[std::min(r, take - 1)];
    }
  }
  return out;
}

// Intermediate activations kept for the backward pass.
struct ForwardCache {
  Eigen::MatrixXd x;                  // d x n
  std::vector<Eigen::MatrixXd> h_in;  // block inputs, H x n
  std::vector<Eigen::MatrixXd> xhat;  // normalized block inputs
  std::vector<Eigen::RowVectorXd> inv_std;
  std::vector<Eigen::MatrixXd> pre;   // fc1 pre-activations
  std::vector<Eigen::MatrixXd> act;   // relu(pre)
  Eigen::MatrixXd h;                  // encoder output
  Eigen::MatrixXd topk;               // K x n selected costs
  Eigen::MatrixXd refine_in;          // width x n
  Eigen::MatrixXd h2;                 // h + refine
  Eigen::RowVectorXd u_init;
  Eigen::RowVectorXd u;
};

namespace detail {

inline Eigen::MatrixXd RefineInput(const Eigen::MatrixXd& topk,
                                   const Eigen::RowVectorXd& u_init,
                                   RefinePooling pooling) {
  Eigen::MatrixXd shifted = topk.rowwise() - u_init;
  switch (pooling) {
    case RefinePooling::kSortedValues:
      return shifted;
    case RefinePooling::kMean:
      return shifted.colwise().mean();
    case RefinePooling::kMax:
      return shifted.colwise().maxCoeff();
  }
  return shifted;
}

}  // namespace detail

// Predicted row potentials, one per row of c. `topk` may be passed in when
// the caller has already computed TopKCosts(c, K).
inline std::vector<double> Forward(const ModelParams& p, const FeatureMatrix& f,
                                   const CostMatrix& c,
                                   ForwardCache* cache = nullptr,
                                   const Eigen::MatrixXd* topk = nullptr) {
  const auto& cfg = p.config;
  if (f.d != static_cast<std::size_t>(cfg.input_dim)) {
    throw Error(ErrorCode::kShapeMismatch,
                "feature dim " + std::to_string(f.d) + " != model input dim " +
                    std::to_string(cfg.input_dim));
  }
  if (f.n != c.size()) {
    throw Error(ErrorCode::kShapeMismatch, "feature rows do not match matrix size");
  }
  const auto n = static_cast<Eigen::Index>(f.n);
  ForwardCache local;
  ForwardCache& fc = cache ? *cache : local;

  fc.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(f.values.data(), n,
                                                          cfg.input_dim)
             .transpose();
  Eigen::MatrixXd h = (p.w_in * fc.x).colwise() + p.b_in;
  const std::size_t nb = p.blocks.size();
  fc.h_in.resize(nb);
  fc.xhat.resize(nb);
  fc.inv_std.resize(nb);
  fc.pre.resize(nb);
  fc.act.resize(nb);
  const double hd = static_cast<double>(cfg.hidden_dim);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& blk = p.blocks[b];
    fc.h_in[b] = h;
    Eigen::RowVectorXd mean = h.colwise().sum() / hd;
    Eigen::MatrixXd centered = h.rowwise() - mean;
    Eigen::RowVectorXd var = centered.array().square().colwise().sum() / hd;
    fc.inv_std[b] = (var.array() + kLayerNormEps).rsqrt();
    fc.xhat[b] = centered.array().rowwise() * fc.inv_std[b].array();
    Eigen::MatrixXd normed =
        (fc.xhat[b].array().colwise() * blk.ln_gain.array()).colwise() +
        blk.ln_bias.array();
    fc.pre[b] = (blk.w1 * normed).colwise() + blk.b1;
    fc.act[b] = fc.pre[b].cwiseMax(0.0);
    h += (blk.w2 * fc.act[b]).colwise() + blk.b2;
  }
  fc.h = h;
  fc.u_init = (p.w_out.transpose() * h).array() + p.b_out(0);

  fc.topk = topk ? *topk : TopKCosts(c, cfg.refine_k);
  fc.refine_in = detail::RefineInput(fc.topk, fc.u_init, cfg.pooling);
  fc.h2 = h + ((p.w_ref * fc.refine_in).colwise() + p.b_ref);
  fc.u = (p.w_out.transpose() * fc.h2).array() + p.b_out(0);
  return std::vector<double>(fc.u.data(), fc.u.data() + n);
}

struct LossResult {
  double value = 0.0;
  double mae = 0.0;
  double slackness = 0.0;
  std::vector<double> grad_u;   // dL/du_hat
  std::vector<int> argmin;      // min-trick argmin per column
};

// MAE(u_hat, u*) + lambda * sum over optimal edges of
// ReLU(C_ij - u_hat_i - v_hat_j), with v_hat rebuilt by the min-trick.
// Subgradient: v_hat_j moves one-for-one with u_hat at its argmin row;
// sign(0) and ReLU'(0) are taken as 0.
inline LossResult Loss(std::span<const double> u_hat, const LabeledInstance& inst,
                       double lambda_cs) {
  const std::size_t n = inst.c.size();
  if (u_hat.size() != n || inst.u_star.size() != n || inst.optimal_cols.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "loss inputs do not match instance size");
  }
  LossResult out;
  out.grad_u.assign(n, 0.0);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = u_hat[i] - inst.u_star[i];
    out.mae += std::abs(diff);
    out.grad_u[i] = (diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : 0.0) / dn;
  }
  out.mae /= dn;
  auto mt = MinTrick(inst.c, u_hat);
  out.argmin = std::move(mt.argmin);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(inst.optimal_cols[i]);
    const double r = ReducedCost(inst.c, mt.duals.u, mt.duals.v, i, j);
    if (r > 0.0) {
      out.slackness += r;
      out.grad_u[i] -= lambda_cs;
      out.grad_u[static_cast<std::size_t>(out.argmin[j])] += lambda_cs;
    }
  }
  out.value = out.mae + lambda_cs * out.slackness;
  return out;
}

// Reverse-mode pass given dL/du for the rows of a cached forward pass.
// Gradients are accumulated into `grad` (same shapes as p).
inline void Backward(const ModelParams& p, const ForwardCache& fc,
                     std::span<const double> grad_u, ModelParams& grad) {
  const auto n = fc.u.size();
  const Eigen::Map<const Eigen::RowVectorXd> du(grad_u.data(), n);
  const double hd = static_cast<double>(p.config.hidden_dim);

  // Final head.
  grad.w_out += fc.h2 * du.transpose();
  grad.b_out(0) += du.sum();
  Eigen::MatrixXd dh2 = p.w_out * du;  // H x n

  // Refine stage.
  grad.w_ref += dh2 * fc.refine_in.transpose();
  grad.b_ref += dh2.rowwise().sum();
  Eigen::MatrixXd d_refine = p.w_ref.transpose() * dh2;  // width x n
  Eigen::RowVectorXd du_init;
  switch (p.config.pooling) {
    case RefinePooling::kSortedValues:
    case RefinePooling::kMean:
      // Mean pooling has width 1 and d(mean)/du_init = -1 as well.
      du_init = -d_refine.colwise().sum();
      break;
    case RefinePooling::kMax:
      du_init = -d_refine.row(0);
      break;
  }

  // Intermediate head (shared weights).
  grad.w_out += fc.h * du_init.transpose();
  grad.b_out(0) += du_init.sum();
  Eigen::MatrixXd dh = dh2 + p.w_out * du_init;

  for (std::size_t bb = p.blocks.size(); bb-- > 0;) {
    const auto& blk = p.blocks[bb];
    auto& gblk = grad.blocks[bb];
    gblk.w2 += dh * fc.act[bb].transpose();
    gblk.b2 += dh.rowwise().sum();
    Eigen::MatrixXd dpre =
        (blk.w2.transpose() * dh).array() * (fc.pre[bb].array() > 0.0).cast<double>();
    Eigen::MatrixXd normed =
        (fc.xhat[bb].array().colwise() * blk.ln_gain.array()).colwise() +
        blk.ln_bias.array();
    gblk.w1 += dpre * normed.transpose();
    gblk.b1 += dpre.rowwise().sum();
    Eigen::MatrixXd dnormed = blk.w1.transpose() * dpre;
    gblk.ln_gain += (dnormed.array() * fc.xhat[bb].array()).rowwise().sum().matrix();
    gblk.ln_bias += dnormed.rowwise().sum();
    Eigen::ArrayXXd dxhat = dnormed.array().colwise() * blk.ln_gain.array();
    Eigen::RowVectorXd mean_d = dxhat.colwise().sum() / hd;
    Eigen::RowVectorXd mean_dx =
        (dxhat * fc.xhat[bb].array()).colwise().sum() / hd;
    Eigen::ArrayXXd dx = dxhat.rowwise() - mean_d.array();
    dx -= fc.xhat[bb].array().rowwise() * mean_dx.array();
    dx = dx.rowwise() * fc.inv_std[bb].array();
    dh += dx.matrix();
  }
  grad.w_in += dh * fc.x.transpose();
  grad.b_in += dh.rowwise().sum();
}

struct GradientResult {
  LossResult loss;
  ModelParams grad;
};

// Loss and full parameter gradient for one labeled instance.
inline GradientResult ComputeGradient(const ModelParams& p,
                                      const LabeledInstance& inst,
                                      double lambda_cs,
                                      const Eigen::MatrixXd* topk = nullptr) {
  ForwardCache fc;
  auto u_hat = Forward(p, inst.features, inst.c, &fc, topk);
  GradientResult out{Loss(u_hat, inst, lambda_cs), ModelParams::Zeros(p.config)};
  Backward(p, fc, out.loss.grad_u, out.grad);
  return out;
}

}  // namespace dualseed

#endif  // DUALSEED_ROWDUALNET_HPP_
