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

// dualseed: dataset generation, training, single solves, benchmarks,
// sweeps and reports.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dualseed/bench.hpp"

namespace {

using namespace dualseed;

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

// Opens `path` for line output; "-" or empty means stdout.
class LineSink {
 public:
  explicit LineSink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::kIo, "cannot write " + path);
    }
  }
  void operator()(const std::string& line) {
    std::ostream& os = file_ ? *file_ : std::cout;
    os << line << '\n';
    os.flush();
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<RunRecord> ReadRecords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(RunRecordFromJson(nlohmann::json::parse(line)));
  }
  return out;
}

ExperimentSpec LoadSpec(const std::string& path, const std::vector<std::string>& overrides) {
  ExperimentSpec spec = path.empty() ? ExperimentSpec{} : ReadExperimentSpec(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kInvalidInput, "--set expects key=value");
    ApplySpecKey(spec, kv.substr(0, eq), kv.substr(eq + 1));
  }
  spec.Validate();
  return spec;
}

nlohmann::json SpecMeta(const ExperimentSpec& spec) {
  return {{"generator", spec.generator},
          {"sizes", spec.sizes},
          {"trials", spec.trials},
          {"strategies", spec.strategies},
          {"seed", spec.seed},
          {"eps", spec.pipeline.eps},
          {"tau", spec.pipeline.tau},
          {"eq_tol", spec.pipeline.eq_tol},
          {"refine_k", spec.pipeline.refine_k},
          {"feature_k", spec.pipeline.feature_k},
          {"feature_dim", spec.pipeline.feature_dim},
          {"mask_fraction", spec.mask_fraction},
          {"warmup", spec.warmup ? "one untimed run per (strategy, n) before timing" : "none"},
          {"clock", "std::chrono::steady_clock"},
          {"cv", "population standard deviation"},
          {"ci", "normal approximation, 1.96 * sample sd / sqrt(m)"}};
}

void AddPipelineOptions(CLI::App* app, PipelineConfig& cfg) {
  app->add_option("--eps", cfg.eps, "Equality tolerance for the density");
  app->add_option("--tau", cfg.tau, "Fallback threshold on density");
  app->add_option("--eq-tol", cfg.eq_tol, "Solver tie tolerance");
  app->add_option("--refine-k", cfg.refine_k, "Top-K costs used by the refine stage");
  app->add_option("--feature-k", cfg.feature_k, "K of the top-K feature statistics");
  app->add_option("--feature-dim", cfg.feature_dim, "Feature dimension (4, 13 or 21)");
}

int Run(int argc, char** argv) {
  CLI::App app{"Learned dual warm starts for the linear assignment problem"};
  app.require_subcommand(1);

  // gen
  struct {
    std::string generator = "dense";
    std::size_t n = 64;
    int count = 1;
    std::uint64_t seed = 0;
    double mask = 0.0;
    std::string out;
    std::string format = "dataset";
    int sweeps = kDefaultCenteringSweeps;
    PipelineConfig cfg;
  } gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate instances (labeled dataset or one matrix)");
  gen_cmd->add_option("--generator", gen.generator)->check(CLI::IsMember({"dense", "block"}));
  gen_cmd->add_option("-n,--n", gen.n, "Matrix size")->required();
  gen_cmd->add_option("--count", gen.count, "Number of instances")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--mask", gen.mask, "Fraction of masked edges");
  gen_cmd->add_option("--format", gen.format)->check(CLI::IsMember({"dataset", "matrix", "csv"}));
  gen_cmd->add_option("--centering-sweeps", gen.sweeps, "Label centering sweeps");
  gen_cmd->add_option("-o,--out", gen.out)->required();
  AddPipelineOptions(gen_cmd, gen.cfg);

  // train
  struct {
    std::string data, out, log, baselines;
    TrainConfig tc;
    ModelConfig mc;
    PipelineConfig cfg;
    std::string pooling = "sorted";
  } tr;
  auto* train_cmd = app.add_subcommand("train", "Train a RowDualNet checkpoint");
  train_cmd->add_option("--data", tr.data, "Labeled dataset")->required();
  train_cmd->add_option("-o,--out", tr.out, "Checkpoint path")->required();
  train_cmd->add_option("--log", tr.log, "Per-epoch JSON lines");
  train_cmd->add_option("--baselines", tr.baselines, "Also fit linreg/median and write them here");
  train_cmd->add_option("--epochs", tr.tc.epochs);
  train_cmd->add_option("--lr", tr.tc.lr);
  train_cmd->add_option("--weight-decay", tr.tc.weight_decay);
  train_cmd->add_option("--lambda", tr.tc.lambda_cs, "Slackness weight");
  train_cmd->add_option("--batch", tr.tc.batch);
  train_cmd->add_option("--patience", tr.tc.scheduler_patience);
  train_cmd->add_option("--val-fraction", tr.tc.val_fraction);
  train_cmd->add_option("--seed", tr.tc.seed);
  train_cmd->add_option("--hidden", tr.mc.hidden_dim);
  train_cmd->add_option("--blocks", tr.mc.num_blocks);
  train_cmd->add_option("--pooling", tr.pooling)->check(CLI::IsMember({"sorted", "mean", "max"}));
  AddPipelineOptions(train_cmd, tr.cfg);

  // solve
  struct {
    std::string matrix, strategy = "cold", checkpoint, baselines, out;
    std::uint64_t seed = 0;
    std::int64_t budget_ns = 0;
    PipelineConfig cfg;
  } sv;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one matrix (.csv or LAPM) with one strategy");
  solve_cmd->add_option("--matrix", sv.matrix)->required();
  solve_cmd->add_option("--strategy", sv.strategy)->check(CLI::IsMember(KnownStrategies()));
  solve_cmd->add_option("--checkpoint", sv.checkpoint);
  solve_cmd->add_option("--baselines", sv.baselines);
  solve_cmd->add_option("--seed", sv.seed, "Seed of the random strategy");
  solve_cmd->add_option("--subgradient-budget-ns", sv.budget_ns);
  AddPipelineOptions(solve_cmd, sv.cfg);

  // bench
  struct {
    std::string spec, out = "-", summary, breakdown, meta;
    std::vector<std::string> overrides;
  } bn;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment spec");
  bench_cmd->add_option("--spec", bn.spec, "key=value spec file");
  bench_cmd->add_option("--set", bn.overrides, "Override a spec key (key=value)");
  bench_cmd->add_option("-o,--out", bn.out, "Records (JSON lines)");
  bench_cmd->add_option("--summary", bn.summary, "Summary CSV");
  bench_cmd->add_option("--breakdown", bn.breakdown, "Stage breakdown CSV");
  bench_cmd->add_option("--meta", bn.meta, "Run metadata JSON");

  // sweep
  struct {
    std::string spec, out = "-", records;
    std::vector<std::string> overrides;
    std::vector<double> values;
    int perms = 10;
  } sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sensitivity sweeps");
  sweep_cmd->require_subcommand(1);
  auto add_sweep = [&](const char* name, const char* help, const char* values_help) {
    auto* cmd = sweep_cmd->add_subcommand(name, help);
    cmd->add_option("--spec", sw.spec);
    cmd->add_option("--set", sw.overrides);
    cmd->add_option("-o,--out", sw.out, "CSV output");
    if (values_help) cmd->add_option("--values", sw.values, values_help)->delimiter(',');
    return cmd;
  };
  auto* noise_cmd = add_sweep("noise", "Oracle duals plus Gaussian noise", "sigma / range(C)");
  auto* sparsity_cmd = add_sweep("sparsity", "Masked-edge fractions", "mask fractions");
  auto* topk_cmd = add_sweep("topk", "Refine top-K (trains one model per K)", "K values");
  auto* features_cmd = add_sweep("features", "Feature dimension (trains one model per d)", "d values");
  auto* perm_cmd = add_sweep("perm", "Row permutations of one base matrix", nullptr);
  perm_cmd->add_option("--perms", sw.perms)->check(CLI::PositiveNumber);
  perm_cmd->add_option("--records", sw.records, "Per-run records (JSON lines)");

  // report
  struct {
    std::string records, summary = "-", breakdown, baseline = "cold";
  } rp;
  auto* report_cmd = app.add_subcommand("report", "Summaries from stored records");
  report_cmd->add_option("--records", rp.records)->required();
  report_cmd->add_option("--summary", rp.summary);
  report_cmd->add_option("--breakdown", rp.breakdown);
  report_cmd->add_option("--baseline", rp.baseline);

  CLI11_PARSE(app, argc, argv);

  if (gen_cmd->parsed()) {
    gen.cfg.Validate();
    auto make = [&](int k) {
      const std::uint64_t s = CounterRng(gen.seed, 0x6E4).Substream(static_cast<std::uint64_t>(k))();
      CostMatrix c = [&] {
        if (gen.generator == "dense") return GenDense(gen.n, s);
        BlockParams p;
        p.n = gen.n;
        p.seed = s;
        return GenBlock(p);
      }();
      return gen.mask > 0.0 ? Sparsify(c, gen.mask, s) : c;
    };
    if (gen.format != "dataset") {
      if (gen.count != 1) throw Error(ErrorCode::kInvalidInput, "matrix formats hold one instance");
      auto c = make(0);
      if (gen.format == "matrix") {
        WriteMatrix(gen.out, c);
      } else {
        std::ostringstream os;
        os.precision(17);
        for (std::size_t i = 0; i < c.size(); ++i) {
          for (std::size_t j = 0; j < c.size(); ++j) os << (j ? "," : "") << c(i, j);
          os << '\n';
        }
        WriteText(gen.out, os.str());
      }
      return 0;
    }
    Dataset d;
    d.instances.resize(static_cast<std::size_t>(gen.count));
    ParallelFor(d.instances.size(), ThreadsFromEnv(), [&](std::size_t k) {
      d.instances[k] = GenLabels(make(static_cast<int>(k)), gen.cfg, gen.sweeps);
    });
    WriteDataset(gen.out, d);
    std::cerr << "wrote " << gen.count << " labeled instances to " << gen.out << '\n';
    return 0;
  }

  if (train_cmd->parsed()) {
    tr.cfg.Validate();
    tr.mc.input_dim = tr.cfg.feature_dim;
    tr.mc.refine_k = tr.cfg.refine_k;
    tr.mc.pooling = tr.pooling == "mean"  ? RefinePooling::kMean
                    : tr.pooling == "max" ? RefinePooling::kMax
                                          : RefinePooling::kSortedValues;
    auto data = ReadDataset(tr.data, tr.cfg).instances;
    LineSink log(tr.log.empty() ? "-" : tr.log);
    auto result = Train(data, tr.tc, tr.mc, nullptr,
                        [&](const EpochRecord& r) { log(ToJson(r).dump()); });
    SaveCheckpoint(result.best_params, tr.out);
    std::cerr << "best epoch " << result.best_epoch << ", checkpoint " << tr.out << '\n';
    if (!tr.baselines.empty()) {
      StrategyContext ctx;
      ctx.linreg = TrainLinReg(data);
      std::map<std::size_t, std::vector<std::vector<double>>> by_n;
      for (const auto& inst : data) by_n[inst.c.size()].push_back(inst.u_star);
      for (const auto& [n, duals] : by_n) ctx.medians[n] = SeedLearnedMedian(duals);
      WriteDataset(tr.baselines, BaselinesToDataset(ctx));
    }
    return 0;
  }

  if (solve_cmd->parsed()) {
    sv.cfg.Validate();
    ExperimentSpec spec;
    spec.pipeline = sv.cfg;
    spec.strategies = {sv.strategy};
    spec.checkpoint = sv.checkpoint;
    spec.baselines = sv.baselines;
    spec.subgradient_budget_ns = sv.budget_ns;
    spec.generator = "file:" + sv.matrix;
    const CostMatrix c = LoadMatrixFile(sv.matrix);
    StrategyContext ctx;
    if (sv.strategy == "linreg" && sv.baselines.empty()) {
      throw Error(ErrorCode::kInvalidInput, "strategy 'linreg' needs --baselines");
    }
    if (sv.strategy == "median" && sv.baselines.empty()) {
      throw Error(ErrorCode::kInvalidInput, "strategy 'median' needs --baselines");
    }
    PrepareContext(spec, ctx, {c.size()});
    std::optional<LabeledInstance> labels;
    if (sv.strategy == "optimal_oracle") labels = GenLabels(c, sv.cfg);
    auto r = RunStrategy(sv.strategy, c, spec, ctx, sv.seed, 1'000'000, labels ? &*labels : nullptr);
    std::cout << ToJson(r).dump() << '\n';
    return r.ok() ? 0 : 1;
  }

  if (bench_cmd->parsed()) {
    auto spec = LoadSpec(bn.spec, bn.overrides);
    LineSink out(bn.out);
    auto records = RunExperiment(spec, {}, [&](const RunRecord& r) { out(ToJson(r).dump()); });
    if (!bn.meta.empty()) WriteText(bn.meta, SpecMeta(spec).dump(2) + "\n");
    if (!bn.summary.empty()) WriteText(bn.summary, SummaryCsv(Summarize(records)));
    if (!bn.breakdown.empty()) WriteText(bn.breakdown, BreakdownCsv(BreakdownTable(records)));
    for (const auto& msg : CostDisagreements(records)) std::cerr << "cost mismatch: " << msg << '\n';
    return CostDisagreements(records).empty() ? 0 : 2;
  }

  if (sweep_cmd->parsed()) {
    auto spec = LoadSpec(sw.spec, sw.overrides);
    auto values = [&](std::vector<double> defaults) { return sw.values.empty() ? defaults : sw.values; };
    auto ints = [](const std::vector<double>& xs) {
      std::vector<int> out;
      for (double x : xs) out.push_back(static_cast<int>(x));
      return out;
    };
    if (noise_cmd->parsed()) {
      WriteText(sw.out, NoiseSweepCsv(SweepNoise(spec, values({0, 0.05, 0.1, 0.2, 0.4}))));
    } else if (sparsity_cmd->parsed()) {
      WriteText(sw.out, AxisSummaryCsv(SweepSparsity(spec, values({0, 0.25, 0.5, 0.75}))));
    } else if (topk_cmd->parsed()) {
      WriteText(sw.out, AxisSummaryCsv(SweepTopK(spec, ints(values({4, 8, 16, 32})))));
    } else if (features_cmd->parsed()) {
      WriteText(sw.out, AxisSummaryCsv(SweepFeatures(spec, ints(values({4, 13, 21})))));
    } else if (perm_cmd->parsed()) {
      std::vector<RunRecord> records;
      WriteText(sw.out, PermutationSweepCsv(SweepPermutation(spec, sw.perms, {}, &records)));
      if (!sw.records.empty()) {
        LineSink rec(sw.records);
        for (const auto& r : records) rec(ToJson(r).dump());
      }
    }
    return 0;
  }

  if (report_cmd->parsed()) {
    auto records = ReadRecords(rp.records);
    WriteText(rp.summary, SummaryCsv(Summarize(records, rp.baseline)));
    if (!rp.breakdown.empty()) WriteText(rp.breakdown, BreakdownCsv(BreakdownTable(records)));
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
