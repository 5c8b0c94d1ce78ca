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

// Experiment harness: instance grids, seed strategies run on identical
// instances, and the sensitivity sweeps.

#ifndef DUALSEED_BENCH_HPP_
#define DUALSEED_BENCH_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dualseed/baselines.hpp"
#include "dualseed/checkpoint.hpp"
#include "dualseed/datagen.hpp"
#include "dualseed/io.hpp"
#include "dualseed/parallel.hpp"
#include "dualseed/stats.hpp"
#include "dualseed/train.hpp"
#include "dualseed/warmstart.hpp"

namespace dualseed {

inline const std::vector<std::string>& KnownStrategies() {
  static const std::vector<std::string> names{"cold",   "neural", "row_mean",   "random",
                                              "linreg", "median", "subgradient", "optimal_oracle"};
  return names;
}

struct ExperimentSpec {
  std::string generator = "dense";  // dense | block | file:<path>
  std::vector<std::size_t> sizes{64};
  int trials = 10;
  std::vector<std::string> strategies{"cold", "neural"};
  PipelineConfig pipeline;
  std::string checkpoint;  // required for neural
  std::string baselines;   // optional LAPD file with fitted linreg / median
  std::uint64_t seed = 0;
  double mask_fraction = 0.0;
  bool warmup = true;
  // 0: match the measured features + model time of the neural strategy on
  // the same instance (1 ms when neural is not run).
  std::int64_t subgradient_budget_ns = 0;
  // Labeled instances generated per size to fit linreg / median (and the
  // models trained inside the top-K and feature sweeps).
  int train_instances = 50;
  int train_epochs = 30;
  int hidden_dim = 192;
  double lambda_cs = 0.1;
  int threads = 0;  // 0: DUALSEED_THREADS

  void Validate() const {
    pipeline.Validate();
    if (trials < 1) throw Error(ErrorCode::kInvalidInput, "trials must be >= 1");
    if (strategies.empty()) throw Error(ErrorCode::kInvalidInput, "strategies must be non-empty");
    if (sizes.empty() && generator.rfind("file:", 0) != 0) {
      throw Error(ErrorCode::kInvalidInput, "sizes must be non-empty");
    }
    for (const auto& s : strategies) {
      if (std::find(KnownStrategies().begin(), KnownStrategies().end(), s) ==
          KnownStrategies().end()) {
        throw Error(ErrorCode::kInvalidInput, "unknown strategy '" + s + "'");
      }
    }
    if (generator != "dense" && generator != "block" && generator.rfind("file:", 0) != 0) {
      throw Error(ErrorCode::kInvalidInput, "unknown generator '" + generator + "'");
    }
    if (train_instances < 1 || train_epochs < 0 || hidden_dim < 1) {
      throw Error(ErrorCode::kInvalidInput, "invalid training settings");
    }
  }
};

namespace detail {

inline std::string Trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    T out;
    if constexpr (std::is_floating_point_v<T>) {
      out = static_cast<T>(std::stod(value, &used));
    } else if constexpr (std::is_signed_v<T>) {
      out = static_cast<T>(std::stoll(value, &used));
    } else {
      if (!value.empty() && value.front() == '-') throw std::invalid_argument("negative");
      out = static_cast<T>(std::stoull(value, &used));
    }
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidInput, "bad value for '" + key + "': '" + value + "'");
  }
}

}  // namespace detail

// Sets one key of the spec; see the README for the documented keys.
inline void ApplySpecKey(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  using detail::ParseNumber;
  if (key == "generator") {
    spec.generator = value;
  } else if (key == "sizes") {
    spec.sizes.clear();
    for (const auto& s : detail::SplitList(value)) spec.sizes.push_back(ParseNumber<std::size_t>(key, s));
  } else if (key == "trials") {
    spec.trials = ParseNumber<int>(key, value);
  } else if (key == "strategies") {
    spec.strategies = detail::SplitList(value);
  } else if (key == "checkpoint") {
    spec.checkpoint = value;
  } else if (key == "baselines") {
    spec.baselines = value;
  } else if (key == "seed") {
    spec.seed = ParseNumber<std::uint64_t>(key, value);
  } else if (key == "mask_fraction") {
    spec.mask_fraction = ParseNumber<double>(key, value);
  } else if (key == "warmup") {
    spec.warmup = ParseNumber<int>(key, value) != 0;
  } else if (key == "subgradient_budget_ns") {
    spec.subgradient_budget_ns = ParseNumber<std::int64_t>(key, value);
  } else if (key == "train_instances") {
    spec.train_instances = ParseNumber<int>(key, value);
  } else if (key == "train_epochs") {
    spec.train_epochs = ParseNumber<int>(key, value);
  } else if (key == "hidden_dim") {
    spec.hidden_dim = ParseNumber<int>(key, value);
  } else if (key == "lambda_cs") {
    spec.lambda_cs = ParseNumber<double>(key, value);
  } else if (key == "threads") {
    spec.threads = ParseNumber<int>(key, value);
  } else if (key == "eps") {
    spec.pipeline.eps = ParseNumber<double>(key, value);
  } else if (key == "tau") {
    spec.pipeline.tau = value == "inf" ? std::numeric_limits<double>::infinity()
                                       : ParseNumber<double>(key, value);
  } else if (key == "eq_tol") {
    spec.pipeline.eq_tol = ParseNumber<double>(key, value);
  } else if (key == "refine_k") {
    spec.pipeline.refine_k = ParseNumber<int>(key, value);
  } else if (key == "feature_k") {
    spec.pipeline.feature_k = ParseNumber<int>(key, value);
  } else if (key == "feature_dim") {
    spec.pipeline.feature_dim = ParseNumber<int>(key, value);
  } else {
    throw Error(ErrorCode::kInvalidInput, "unknown spec key '" + key + "'");
  }
}

// key=value lines; '#' starts a comment.
inline ExperimentSpec ParseExperimentSpec(const std::string& text) {
  ExperimentSpec spec;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidInput, "line " + std::to_string(line_no) + ": expected key=value");
    }
    ApplySpecKey(spec, detail::Trim(line.substr(0, eq)), detail::Trim(line.substr(eq + 1)));
  }
  spec.Validate();
  return spec;
}

inline ExperimentSpec ReadExperimentSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseExperimentSpec(ss.str());
}

inline std::uint64_t InstanceSeed(std::uint64_t seed, std::size_t n, int trial) {
  return CounterRng(seed, n).Substream(static_cast<std::uint64_t>(trial))();
}

inline CostMatrix LoadMatrixFile(const std::string& path) {
  const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  return csv ? ReadCsvMatrix(path) : ReadMatrix(path);
}

// Instance for one grid cell (sparsified when mask_fraction > 0).
inline CostMatrix GenerateInstance(const ExperimentSpec& spec, std::size_t n, int trial) {
  const std::uint64_t s = InstanceSeed(spec.seed, n, trial);
  CostMatrix c = [&] {
    if (spec.generator == "dense") return GenDense(n, s);
    if (spec.generator == "block") {
      BlockParams p;
      p.n = n;
      p.seed = s;
      return GenBlock(p);
    }
    return LoadMatrixFile(spec.generator.substr(5));
  }();
  return spec.mask_fraction > 0.0 ? Sparsify(c, spec.mask_fraction, s) : c;
}

// Learned artifacts the strategies may need.
struct StrategyContext {
  std::shared_ptr<const ModelParams> model;
  std::optional<LinRegWeights> linreg;
  std::map<std::size_t, std::vector<double>> medians;  // by n
};

// Labeled training instances from the spec's generator, on a seed stream
// disjoint from the evaluation instances.
inline std::vector<LabeledInstance> GenerateTrainingSet(const ExperimentSpec& spec, std::size_t n,
                                                        int count) {
  ExperimentSpec train = spec;
  train.seed = CounterRng(spec.seed, 0x7EA1).Substream(n)();
  std::vector<LabeledInstance> out(static_cast<std::size_t>(count));
  ParallelFor(out.size(), spec.threads > 0 ? spec.threads : ThreadsFromEnv(), [&](std::size_t k) {
    out[k] = GenLabels(GenerateInstance(train, n, static_cast<int>(k)), spec.pipeline);
  });
  return out;
}

inline constexpr const char* kLinRegWeightTensor = "linreg.w";
inline constexpr const char* kLinRegBiasTensor = "linreg.b";
inline constexpr const char* kMedianTensorPrefix = "median.";  // + n

// Fitted baselines as dataset tensors (stored without instances).
inline Dataset BaselinesToDataset(const StrategyContext& ctx) {
  Dataset d;
  if (ctx.linreg) {
    d.tensors[kLinRegWeightTensor] = {1, ctx.linreg->w.size(), ctx.linreg->w};
    d.tensors[kLinRegBiasTensor] = {1, 1, {ctx.linreg->b}};
  }
  for (const auto& [n, m] : ctx.medians) {
    d.tensors[kMedianTensorPrefix + std::to_string(n)] = {1, m.size(), m};
  }
  return d;
}

inline void LoadBaselines(const Dataset& d, StrategyContext& ctx) {
  auto w = d.tensors.find(kLinRegWeightTensor);
  auto b = d.tensors.find(kLinRegBiasTensor);
  if (w != d.tensors.end() && b != d.tensors.end()) {
    if (b->second.values.size() != 1) {
      throw Error(ErrorCode::kShapeMismatch, "linreg bias must be a scalar");
    }
    ctx.linreg = LinRegWeights{w->second.values, b->second.values[0]};
  }
  const std::string prefix = kMedianTensorPrefix;
  for (const auto& [name, t] : d.tensors) {
    if (name.rfind(prefix, 0) != 0) continue;
    const auto n = detail::ParseNumber<std::size_t>(name, name.substr(prefix.size()));
    if (t.values.size() != n) throw Error(ErrorCode::kShapeMismatch, "median tensor '" + name + "'");
    ctx.medians[n] = t.values;
  }
}

// Fills whatever the spec's strategies need and the context lacks.
inline void PrepareContext(const ExperimentSpec& spec, StrategyContext& ctx,
                           const std::vector<std::size_t>& sizes) {
  auto wants = [&](const char* s) {
    return std::find(spec.strategies.begin(), spec.strategies.end(), s) != spec.strategies.end();
  };
  if (!spec.baselines.empty()) LoadBaselines(ReadDataset(spec.baselines, spec.pipeline), ctx);
  if (wants("neural") && !ctx.model) {
    if (spec.checkpoint.empty()) {
      throw Error(ErrorCode::kInvalidInput, "strategy 'neural' needs a checkpoint");
    }
    ctx.model = std::make_shared<ModelParams>(
        LoadCheckpoint(spec.checkpoint, spec.pipeline.feature_dim));
  }
  if (!(wants("linreg") && !ctx.linreg) && !wants("median")) return;
  std::vector<LabeledInstance> pooled;
  for (std::size_t n : sizes) {
    if (!wants("median") || ctx.medians.contains(n)) {
      if (ctx.linreg || !wants("linreg")) continue;
    }
    auto data = GenerateTrainingSet(spec, n, spec.train_instances);
    if (wants("median") && !ctx.medians.contains(n)) {
      std::vector<std::vector<double>> duals;
      for (const auto& d : data) duals.push_back(d.u_star);
      ctx.medians[n] = SeedLearnedMedian(duals);
    }
    if (wants("linreg") && !ctx.linreg) {
      for (auto& d : data) pooled.push_back(std::move(d));
    }
  }
  if (wants("linreg") && !ctx.linreg) ctx.linreg = TrainLinReg(pooled);
}

namespace detail {

inline std::int64_t NowNs(Clock::time_point since) { return ElapsedNs(since); }

inline void FillFromReport(RunRecord& r, const PipelineReport& rep) {
  r.total_cost = rep.total_cost;
  r.stage_times = rep.stage_times;
  r.density_rho = rep.density_rho;
  r.fallback_triggered = rep.fallback_triggered;
  r.SetStats(rep.solve_stats);
}

}  // namespace detail

// Runs one strategy on one instance. `budget_hint_ns` is the subgradient
// budget when the spec asks to match the model time.
inline RunRecord RunStrategy(const std::string& strategy, const CostMatrix& c,
                             const ExperimentSpec& spec, const StrategyContext& ctx,
                             std::uint64_t instance_seed, std::int64_t budget_hint_ns,
                             const LabeledInstance* oracle = nullptr) {
  RunRecord r;
  r.strategy = strategy;
  r.generator = spec.generator;
  r.n = c.size();
  r.instance_seed = instance_seed;
  const auto& cfg = spec.pipeline;
  try {
    const auto start = detail::Clock::now();
    if (strategy == "cold") {
      SolverOptions opts;
      opts.eq_tol = cfg.eq_tol;
      auto s = SolveCold(c, opts);
      r.wall_ns = detail::NowNs(start);
      r.total_cost = s.assignment.total_cost;
      for (const char* stage : kStageNames) r.stage_times[stage] = 0;
      r.stage_times[kStageSolver] = r.wall_ns;
      r.SetStats(s.stats);
      return r;
    }
    if (strategy == "neural") {
      if (!ctx.model) throw Error(ErrorCode::kInvalidInput, "no model loaded");
      auto w = WarmSolve(c, *ctx.model, cfg);
      r.wall_ns = detail::NowNs(start);
      detail::FillFromReport(r, w.report);
      return r;
    }
    PipelineReport pre;
    StageTimer timer(pre);
    std::vector<double> u;
    if (strategy == "row_mean") {
      u = SeedRowMean(c);
    } else if (strategy == "random") {
      u = SeedRandom(c, instance_seed);
    } else if (strategy == "linreg") {
      if (!ctx.linreg) throw Error(ErrorCode::kInvalidInput, "no linear model");
      auto f = ExtractFeatures(c, cfg);
      timer.Charge(kStageFeatures);
      u = SeedLinReg(f, *ctx.linreg);
    } else if (strategy == "median") {
      auto it = ctx.medians.find(c.size());
      if (it == ctx.medians.end()) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "no median vector for n = " + std::to_string(c.size()));
      }
      u = ApplyLearnedMedian(it->second, c);
    } else if (strategy == "subgradient") {
      SubgradientConfig sg;
      sg.time_budget_ns = spec.subgradient_budget_ns > 0 ? spec.subgradient_budget_ns
                                                         : std::max<std::int64_t>(budget_hint_ns, 1);
      u = SeedSubgradient(c, sg).u;
    } else if (strategy == "optimal_oracle") {
      if (!oracle) throw Error(ErrorCode::kInvalidInput, "oracle labels missing");
      u = oracle->u_star;
    } else {
      throw Error(ErrorCode::kInvalidInput, "unknown strategy '" + strategy + "'");
    }
    timer.Charge(kStageModel);
    auto w = SolveFromRowSeed(c, u, cfg, std::move(pre));
    r.wall_ns = detail::NowNs(start);
    detail::FillFromReport(r, w.report);
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

using RecordSink = std::function<void(const RunRecord&)>;

// Every strategy on every (size, trial) instance. Strategies of one
// instance run back to back on one worker; cells may run in parallel.
inline std::vector<RunRecord> RunExperiment(const ExperimentSpec& spec, StrategyContext ctx = {},
                                            const RecordSink& sink = {}) {
  spec.Validate();
  const bool from_file = spec.generator.rfind("file:", 0) == 0;
  std::vector<std::size_t> sizes = spec.sizes;
  if (from_file) sizes = {LoadMatrixFile(spec.generator.substr(5)).size()};
  PrepareContext(spec, ctx, sizes);
  const bool oracle = std::find(spec.strategies.begin(), spec.strategies.end(),
                                "optimal_oracle") != spec.strategies.end();
  // neural first so its model time can size the subgradient budget.
  std::vector<std::string> order = spec.strategies;
  std::stable_partition(order.begin(), order.end(), [](const auto& s) { return s == "neural"; });

  struct Cell {
    std::size_t n;
    int trial;
  };
  std::vector<Cell> cells;
  for (std::size_t n : sizes) {
    for (int t = 0; t < spec.trials; ++t) cells.push_back({n, t});
  }
  std::vector<std::vector<RunRecord>> results(cells.size());
  const int threads = spec.threads > 0 ? spec.threads : ThreadsFromEnv();
  ParallelFor(cells.size(), threads, [&](std::size_t k) {
    const auto [n, trial] = cells[k];
    const CostMatrix c = GenerateInstance(spec, n, trial);
    const std::uint64_t s = InstanceSeed(spec.seed, n, trial);
    std::optional<LabeledInstance> labels;
    if (oracle) labels = GenLabels(c, spec.pipeline);
    if (spec.warmup && trial == 0) {
      for (const auto& strategy : order) {
        RunStrategy(strategy, c, spec, ctx, s, 1'000'000, labels ? &*labels : nullptr);
      }
    }
    std::int64_t hint = 1'000'000;
    for (const auto& strategy : order) {
      auto r = RunStrategy(strategy, c, spec, ctx, s, hint, labels ? &*labels : nullptr);
      r.trial = trial;
      if (strategy == "neural" && r.ok()) {
        hint = r.stage_times[kStageFeatures] + r.stage_times[kStageModel];
      }
      results[k].push_back(std::move(r));
    }
  });
  std::vector<RunRecord> out;
  for (auto& cell : results) {
    // Report in the spec's strategy order.
    for (const auto& name : spec.strategies) {
      for (auto& r : cell) {
        if (r.strategy == name) {
          if (sink) sink(r);
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct NoiseSweepRow {
  double sigma = 0.0;  // in units of range(C)
  std::size_t n = 0;
  int instances = 0;
  double mean_rho = 0.0;
  double mean_dual_update_steps = 0.0;
  double mean_greedy_rate = 0.0;
  double fallback_rate = 0.0;  // share with rho < tau
};

// Seeds u* + N(0, (sigma * range)^2) solved without the fallback; the
// fallback rate is what the spec's tau would have done.
inline std::vector<NoiseSweepRow> SweepNoise(const ExperimentSpec& spec, std::vector<double> sigmas) {
  spec.Validate();
  std::sort(sigmas.begin(), sigmas.end());
  PipelineConfig no_fallback = spec.pipeline;
  no_fallback.tau = 0.0;
  std::vector<NoiseSweepRow> out;
  for (std::size_t n : spec.sizes) {
    std::vector<LabeledInstance> data(static_cast<std::size_t>(spec.trials));
    ParallelFor(data.size(), spec.threads > 0 ? spec.threads : ThreadsFromEnv(), [&](std::size_t k) {
      data[k] = GenLabels(GenerateInstance(spec, n, static_cast<int>(k)), spec.pipeline);
    });
    for (std::size_t si = 0; si < sigmas.size(); ++si) {
      NoiseSweepRow row;
      row.sigma = sigmas[si];
      row.n = n;
      row.instances = spec.trials;
      for (std::size_t k = 0; k < data.size(); ++k) {
        const auto& inst = data[k];
        CounterRng rng = CounterRng(spec.seed, 0x4015E).Substream(n * 1000003 + k);
        auto u = inst.u_star;
        const double scale = sigmas[si] * inst.c.range();
        for (auto& x : u) x += scale * rng.Normal();
        auto w = SolveFromRowSeed(inst.c, u, no_fallback);
        row.mean_rho += w.report.density_rho;
        row.mean_dual_update_steps += w.report.solve_stats.dual_update_steps;
        row.mean_greedy_rate += static_cast<double>(w.report.solve_stats.greedy_matched) / n;
        row.fallback_rate += w.report.density_rho < spec.pipeline.tau ? 1.0 : 0.0;
      }
      const double m = static_cast<double>(data.size());
      row.mean_rho /= m;
      row.mean_dual_update_steps /= m;
      row.mean_greedy_rate /= m;
      row.fallback_rate /= m;
      out.push_back(row);
    }
  }
  return out;
}

inline std::string NoiseSweepCsv(const std::vector<NoiseSweepRow>& rows) {
  std::ostringstream os;
  os << "sigma,n,instances,mean_rho,mean_dual_update_steps,mean_greedy_rate,fallback_rate\n"
     << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.sigma << ',' << r.n << ',' << r.instances << ',' << r.mean_rho << ','
       << r.mean_dual_update_steps << ',' << r.mean_greedy_rate << ',' << r.fallback_rate << '\n';
  }
  return os.str();
}

// Summary rows tagged with the swept axis value.
struct AxisSummaryRow {
  std::string axis;
  double value = 0.0;
  SummaryRow summary;
};

inline std::string AxisSummaryCsv(const std::vector<AxisSummaryRow>& rows) {
  std::string out = std::string("axis,value,") + kSummaryHeader + "\n";
  for (const auto& r : rows) {
    std::ostringstream os;
    os << std::setprecision(10) << r.axis << ',' << r.value << ',' << CsvFields(r.summary);
    out += os.str() + "\n";
  }
  return out;
}

inline std::vector<AxisSummaryRow> SweepSparsity(const ExperimentSpec& spec,
                                                 const std::vector<double>& fractions,
                                                 const StrategyContext& ctx = {}) {
  std::vector<AxisSummaryRow> out;
  for (double f : fractions) {
    ExperimentSpec s = spec;
    s.mask_fraction = f;
    auto records = RunExperiment(s, ctx);
    for (const auto& row : Summarize(records)) out.push_back({"mask_fraction", f, row});
  }
  return out;
}

// Trains a RowDualNet on the spec's generator at size n.
inline ModelParams TrainForSpec(const ExperimentSpec& spec, std::size_t n, const ModelConfig& mc) {
  auto data = GenerateTrainingSet(spec, n, spec.train_instances);
  TrainConfig tc;
  tc.epochs = spec.train_epochs;
  tc.lambda_cs = spec.lambda_cs;
  tc.seed = spec.seed;
  tc.threads = spec.threads;
  return Train(data, tc, mc).best_params;
}

namespace detail {

// One trained model per axis value, then cold vs neural on the same grid.
inline std::vector<AxisSummaryRow> SweepTrainedAxis(
    const ExperimentSpec& spec, const std::string& axis, const std::vector<int>& values,
    const std::function<void(ExperimentSpec&, ModelConfig&, int)>& apply) {
  std::vector<AxisSummaryRow> out;
  for (int v : values) {
    ExperimentSpec s = spec;
    s.strategies = {"cold", "neural"};
    ModelConfig mc;
    mc.hidden_dim = spec.hidden_dim;
    apply(s, mc, v);
    s.Validate();
    StrategyContext ctx;
    ctx.model = std::make_shared<ModelParams>(TrainForSpec(s, s.sizes.front(), mc));
    auto records = RunExperiment(s, ctx);
    for (const auto& row : Summarize(records)) out.push_back({axis, static_cast<double>(v), row});
  }
  return out;
}

}  // namespace detail

inline std::vector<AxisSummaryRow> SweepTopK(const ExperimentSpec& spec, const std::vector<int>& ks) {
  return detail::SweepTrainedAxis(spec, "refine_k", ks, [](ExperimentSpec& s, ModelConfig& mc, int k) {
    s.pipeline.refine_k = k;
    mc.refine_k = k;
    mc.input_dim = s.pipeline.feature_dim;
  });
}

inline std::vector<AxisSummaryRow> SweepFeatures(const ExperimentSpec& spec,
                                                 const std::vector<int>& dims) {
  return detail::SweepTrainedAxis(spec, "feature_dim", dims, [](ExperimentSpec& s, ModelConfig& mc, int d) {
    s.pipeline.feature_dim = d;
    mc.input_dim = d;
    mc.refine_k = s.pipeline.refine_k;
  });
}

struct PermutationSweepRow {
  std::string strategy;
  std::size_t n = 0;
  int permutations = 0;
  bool cost_identical = true;
  double cost = 0.0;
  double wall_mean_ns = 0.0;
  double wall_std_ns = 0.0;  // population
  double wall_cv = 0.0;
  double augment_searches_mean = 0.0;
  double augment_searches_cv = 0.0;
};

// Row permutations of one base matrix (first size, trial 0). The returned
// records carry the permutation index in `trial`.
inline std::vector<PermutationSweepRow> SweepPermutation(const ExperimentSpec& spec, int num_perms,
                                                         StrategyContext ctx = {},
                                                         std::vector<RunRecord>* records = nullptr) {
  spec.Validate();
  if (num_perms < 1) throw Error(ErrorCode::kInvalidInput, "num_perms must be >= 1");
  const CostMatrix base = GenerateInstance(spec, spec.sizes.front(), 0);
  const std::size_t n = base.size();
  PrepareContext(spec, ctx, {n});
  std::map<std::string, std::vector<RunRecord>> by_strategy;
  for (int p = 0; p < num_perms; ++p) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng = CounterRng(spec.seed, 0x9E53).Substream(static_cast<std::uint64_t>(p));
    rng.Shuffle(std::span<std::size_t>(perm));
    std::vector<double> vals(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = base.row(perm[i]);
      std::copy(row.begin(), row.end(), vals.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    CostMatrix c(n, std::move(vals), base.sentinel());
    std::optional<LabeledInstance> labels;
    if (std::find(spec.strategies.begin(), spec.strategies.end(), "optimal_oracle") !=
        spec.strategies.end()) {
      labels = GenLabels(c, spec.pipeline);
    }
    if (spec.warmup && p == 0) {
      for (const auto& s : spec.strategies) {
        RunStrategy(s, c, spec, ctx, spec.seed, 1'000'000, labels ? &*labels : nullptr);
      }
    }
    for (const auto& s : spec.strategies) {
      auto r = RunStrategy(s, c, spec, ctx, spec.seed, 1'000'000, labels ? &*labels : nullptr);
      r.trial = p;
      if (records) records->push_back(r);
      by_strategy[s].push_back(std::move(r));
    }
  }
  std::vector<PermutationSweepRow> out;
  for (const auto& s : spec.strategies) {
    const auto& rs = by_strategy[s];
    PermutationSweepRow row;
    row.strategy = s;
    row.n = n;
    row.permutations = num_perms;
    std::vector<double> walls, searches;
    for (const auto& r : rs) {
      if (!r.ok()) {
        row.cost_identical = false;
        continue;
      }
      if (walls.empty()) row.cost = r.total_cost;
      row.cost_identical = row.cost_identical && r.total_cost == row.cost;
      walls.push_back(static_cast<double>(r.wall_ns));
      searches.push_back(r.augment_searches);
    }
    row.wall_mean_ns = MeanOf(walls);
    row.wall_std_ns = PopulationStdOf(walls);
    row.wall_cv = CoefficientOfVariation(walls);
    row.augment_searches_mean = MeanOf(searches);
    row.augment_searches_cv = CoefficientOfVariation(searches);
    out.push_back(row);
  }
  return out;
}

inline std::string PermutationSweepCsv(const std::vector<PermutationSweepRow>& rows) {
  std::ostringstream os;
  os << "strategy,n,permutations,cost_identical,cost,wall_mean_ns,wall_std_ns,wall_cv,"
        "augment_searches_mean,augment_searches_cv\n"
     << std::setprecision(12);
  for (const auto& r : rows) {
    os << r.strategy << ',' << r.n << ',' << r.permutations << ',' << (r.cost_identical ? 1 : 0)
       << ',' << r.cost << ',' << r.wall_mean_ns << ',' << r.wall_std_ns << ',' << r.wall_cv
       << ',' << r.augment_searches_mean << ',' << r.augment_searches_cv << '\n';
  }
  return os.str();
}

}  // namespace dualseed

#endif  // DUALSEED_BENCH_HPP_
