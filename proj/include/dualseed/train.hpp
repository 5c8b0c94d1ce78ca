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

// Training loop: AdamW with decoupled weight decay and a reduce-on-plateau
// learning-rate schedule driven by validation loss.

#ifndef DUALSEED_TRAIN_HPP_
#define DUALSEED_TRAIN_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "dualseed/error.hpp"
#include "dualseed/parallel.hpp"
#include "dualseed/rng.hpp"
#include "dualseed/rowdualnet.hpp"

namespace dualseed {

struct TrainConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double scheduler_factor = 0.5;
  int scheduler_patience = 10;
  double scheduler_threshold = 1e-4;  // relative improvement
  double min_lr = 0.0;
  double lambda_cs = 0.1;
  int batch = 4;
  int epochs = 100;
  double val_fraction = 0.1;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: DUALSEED_THREADS

  void Validate() const {
    if (!(lr >= 0.0) || !std::isfinite(lr)) throw Error(ErrorCode::kInvalidInput, "lr must be >= 0");
    if (!(lambda_cs >= 0.0)) throw Error(ErrorCode::kInvalidInput, "lambda_cs must be >= 0");
    if (batch < 1 || epochs < 0 || scheduler_patience < 0) {
      throw Error(ErrorCode::kInvalidInput, "batch >= 1, epochs >= 0, patience >= 0 required");
    }
    if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
      throw Error(ErrorCode::kInvalidInput, "val_fraction must be in [0, 1)");
    }
    if (!(scheduler_factor > 0.0 && scheduler_factor < 1.0)) {
      throw Error(ErrorCode::kInvalidInput, "scheduler_factor must be in (0, 1)");
    }
  }
};

class AdamW {
 public:
  AdamW(const ModelParams& shape, const TrainConfig& cfg)
      : m_(ModelParams::Zeros(shape.config)),
        v_(ModelParams::Zeros(shape.config)),
        beta1_(cfg.beta1),
        beta2_(cfg.beta2),
        eps_(cfg.adam_eps),
        weight_decay_(cfg.weight_decay) {}

  void Step(ModelParams& p, const ModelParams& grad, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto pt = p.Tensors();
    auto gt = grad.Tensors();
    auto mt = m_.Tensors();
    auto vt = v_.Tensors();
    for (std::size_t k = 0; k < pt.size(); ++k) {
      double* w = pt[k].data;
      const double* g = gt[k].data;
      double* m = mt[k].data;
      double* v = vt[k].data;
      for (std::size_t e = 0; e < pt[k].size(); ++e) {
        w[e] -= lr * weight_decay_ * w[e];
        m[e] = beta1_ * m[e] + (1.0 - beta1_) * g[e];
        v[e] = beta2_ * v[e] + (1.0 - beta2_) * g[e] * g[e];
        w[e] -= lr * (m[e] / bc1) / (std::sqrt(v[e] / bc2) + eps_);
      }
    }
  }

  std::int64_t steps() const { return t_; }

 private:
  ModelParams m_, v_;
  double beta1_, beta2_, eps_, weight_decay_;
  std::int64_t t_ = 0;
};

// Mode "min", relative threshold, no cooldown.
class ReduceLrOnPlateau {
 public:
  ReduceLrOnPlateau(double lr, const TrainConfig& cfg)
      : lr_(lr),
        factor_(cfg.scheduler_factor),
        patience_(cfg.scheduler_patience),
        threshold_(cfg.scheduler_threshold),
        min_lr_(cfg.min_lr) {}

  // Returns the learning rate for the next epoch.
  double Observe(double metric) {
    if (metric < best_ * (1.0 - threshold_)) {
      best_ = metric;
      bad_epochs_ = 0;
    } else if (++bad_epochs_ > patience_) {
      lr_ = std::max(lr_ * factor_, min_lr_);
      bad_epochs_ = 0;
    }
    return lr_;
  }

  double lr() const { return lr_; }

 private:
  double lr_, factor_;
  int patience_;
  double threshold_, min_lr_;
  double best_ = std::numeric_limits<double>::infinity();
  int bad_epochs_ = 0;
};

struct EpochRecord {
  int epoch = 0;  // 0: the untrained model
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_mae = 0.0;
  double lr = 0.0;
};

inline nlohmann::json ToJson(const EpochRecord& r) {
  return {{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"val_loss", r.val_loss},
          {"val_mae", r.val_mae}, {"lr", r.lr}};
}

struct TrainResult {
  ModelParams params;       // after the last epoch
  ModelParams best_params;  // lowest monitored loss, epoch 0 included
  int best_epoch = 0;
  std::vector<EpochRecord> log;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
};

namespace detail {

struct EvalResult {
  double loss = 0.0;
  double mae = 0.0;
};

inline EvalResult Evaluate(const ModelParams& p, std::span<const LabeledInstance> data,
                           std::span<const std::size_t> idx,
                           const std::vector<Eigen::MatrixXd>& topk, double lambda,
                           int threads) {
  EvalResult out;
  if (idx.empty()) return out;
  std::vector<LossResult> losses(idx.size());
  ParallelFor(idx.size(), threads, [&](std::size_t k) {
    const auto& inst = data[idx[k]];
    auto u = Forward(p, inst.features, inst.c, nullptr, &topk[idx[k]]);
    losses[k] = Loss(u, inst, lambda);
  });
  for (const auto& l : losses) {
    out.loss += l.value;
    out.mae += l.mae;
  }
  out.loss /= static_cast<double>(idx.size());
  out.mae /= static_cast<double>(idx.size());
  return out;
}

}  // namespace detail

using EpochCallback = std::function<void(const EpochRecord&)>;

// Trains from `init` (or a fresh He initialization seeded by cfg.seed).
inline TrainResult Train(std::span<const LabeledInstance> data, const TrainConfig& cfg,
                         const ModelConfig& model_cfg, const ModelParams* init = nullptr,
                         const EpochCallback& on_epoch = {}) {
  cfg.Validate();
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "training dataset is empty");
  for (const auto& inst : data) {
    if (inst.features.d != static_cast<std::size_t>(model_cfg.input_dim)) {
      throw Error(ErrorCode::kShapeMismatch, "instance feature dim does not match model");
    }
  }
  const int threads = cfg.threads > 0 ? cfg.threads : ThreadsFromEnv();
  TrainResult out;
  out.params = init ? *init : ModelParams::Init(model_cfg, cfg.seed);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  CounterRng split_rng(cfg.seed, 0x5B117);
  split_rng.Shuffle(std::span<std::size_t>(order));
  std::size_t n_val = 0;
  if (data.size() > 1 && cfg.val_fraction > 0.0) {
    n_val = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.val_fraction * static_cast<double>(data.size()))));
    n_val = std::min(n_val, data.size() - 1);
  }
  out.val_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  out.train_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  // Without a validation split the scheduler watches the training loss.
  const auto& monitor = n_val > 0 ? out.val_indices : out.train_indices;

  std::vector<Eigen::MatrixXd> topk(data.size());
  ParallelFor(data.size(), threads, [&](std::size_t k) {
    topk[k] = TopKCosts(data[k].c, model_cfg.refine_k);
  });

  AdamW opt(out.params, cfg);
  ReduceLrOnPlateau sched(cfg.lr, cfg);
  auto record = [&](int epoch, double train_loss) {
    auto val = detail::Evaluate(out.params, data, monitor, topk, cfg.lambda_cs, threads);
    EpochRecord r{epoch, train_loss, val.loss, val.mae, sched.lr()};
    out.log.push_back(r);
    if (epoch == 0 || r.val_loss < out.log[static_cast<std::size_t>(out.best_epoch)].val_loss) {
      out.best_epoch = epoch;
      out.best_params = out.params;
    }
    if (on_epoch) on_epoch(r);
    return r;
  };
  record(0, detail::Evaluate(out.params, data, out.train_indices, topk, cfg.lambda_cs,
                             threads).loss);

  std::vector<std::size_t> epoch_order = out.train_indices;
  const auto batch = static_cast<std::size_t>(cfg.batch);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    CounterRng shuffle = CounterRng(cfg.seed, 0x0DE7).Substream(static_cast<std::uint64_t>(epoch));
    shuffle.Shuffle(std::span<std::size_t>(epoch_order));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < epoch_order.size(); start += batch) {
      const std::size_t stop = std::min(start + batch, epoch_order.size());
      std::vector<GradientResult> grads(stop - start);
      ParallelFor(grads.size(), threads, [&](std::size_t k) {
        const std::size_t idx = epoch_order[start + k];
        grads[k] = ComputeGradient(out.params, data[idx], cfg.lambda_cs, &topk[idx]);
      });
      ModelParams total = ModelParams::Zeros(model_cfg);
      auto tt = total.Tensors();
      for (const auto& g : grads) {
        loss_sum += g.loss.value;
        auto gt = g.grad.Tensors();
        for (std::size_t t = 0; t < tt.size(); ++t) {
          for (std::size_t e = 0; e < tt[t].size(); ++e) tt[t].data[e] += gt[t].data[e];
        }
      }
      const double scale = 1.0 / static_cast<double>(grads.size());
      for (auto& t : tt) {
        for (double& x : t.span()) x *= scale;
      }
      opt.Step(out.params, total, sched.lr());
    }
    if (!out.params.AllFinite()) {
      throw Error(ErrorCode::kNonFinite, "training diverged at epoch " + std::to_string(epoch));
    }
    const double train_loss = loss_sum / static_cast<double>(epoch_order.size());
    auto r = record(epoch, train_loss);
    sched.Observe(r.val_loss);
  }
  return out;
}

}  // namespace dualseed

#endif  // DUALSEED_TRAIN_HPP_
