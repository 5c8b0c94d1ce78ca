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

// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion outside --expect-fail passes. Known
// failures still print FAIL with their measured values; they are listed on
// the command line (and in the README) rather than hidden.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dualseed/bench.hpp"
#include "dualseed/gradcheck.hpp"

namespace {

using namespace dualseed;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::string Join(const std::vector<double>& xs, const char* fmt = "%.4g") {
  std::string out = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? ", " : "") + Fmt(fmt, xs[k]);
  return out + "]";
}

CostMatrix RandomMatrix(std::size_t n, CounterRng& rng, bool integer, double scale = 1.0) {
  std::vector<double> vals(n * n);
  for (auto& x : vals) {
    x = integer ? static_cast<double>(rng.Below(21)) - 5.0 : scale * rng.Uniform(-1.0, 1.0);
  }
  return CostMatrix(n, std::move(vals));
}

// Arbitrary u, then v_j = min_i (C_ij - u_i) less a random slack on about
// half the columns.
DualPotentials FuzzedFeasibleSeed(const CostMatrix& c, CounterRng& rng, double spread) {
  const std::size_t n = c.size();
  DualPotentials d;
  d.u.resize(n);
  for (auto& x : d.u) x = rng.Uniform(-spread, spread);
  d.v.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d.v[j] = std::min(d.v[j], c(i, j) - d.u[i]);
  }
  for (auto& x : d.v) {
    if (rng.Uniform() < 0.5) x -= rng.Uniform(0.0, spread);
  }
  return d;
}

bool SameCost(double a, double b) { return a == b || std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

// Shared state: the desk-scale model is trained once and reused.
struct Context {
  int threads = 1;
  int train_epochs = 60;
  std::shared_ptr<ModelParams> model;
  double train_seconds = 0.0;
  std::string save_model;

  const ModelParams& Model() {
    if (model) return *model;
    const auto start = detail::Clock::now();
    std::vector<LabeledInstance> data(200);
    ParallelFor(data.size(), threads, [&](std::size_t k) {
      data[k] = GenLabels(GenDense(128, 70'000 + k));
    });
    TrainConfig tc;
    tc.epochs = train_epochs;
    tc.seed = 7;
    tc.threads = threads;
    model = std::make_shared<ModelParams>(Train(data, tc, ModelConfig{}).best_params);
    train_seconds = detail::ElapsedNs(start) / 1e9;
    if (!save_model.empty()) SaveCheckpoint(*model, save_model);
    return *model;
  }
};

std::int64_t DualUpdates(const WarmResult& w) { return w.report.solve_stats.dual_update_steps; }

Outcome Exactness(Context&) {
  CounterRng rng(101);
  int instances = 0, solves = 0, mismatches = 0, uncertified = 0;
  for (int t = 0; t < 504; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 7);
    const bool integer = t % 2 == 0;
    auto c = RandomMatrix(n, rng, integer);
    const auto bf = BruteForce(c);
    for (int s = 0; s < 50; ++s) {
      auto r = SolveSeeded(c, FuzzedFeasibleSeed(c, rng, integer ? 10.0 : 1.0));
      const bool ok = integer ? r.assignment.total_cost == bf.total_cost
                              : std::abs(r.assignment.total_cost - bf.total_cost) <= 1e-9;
      mismatches += !ok;
      uncertified += !VerifyCertificate(c, r.assignment, r.duals).ok;
      ++solves;
    }
    ++instances;
  }
  return {mismatches == 0 && uncertified == 0,
          Fmt("%d instances (n 2..8, int/float), %d seeded solves, %d cost mismatches, "
              "%d failed certificates",
              instances, solves, mismatches, uncertified)};
}

Outcome MinTrickFeasibility(Context&) {
  CounterRng rng(202);
  std::size_t violations = 0;
  int pairs = 0;
  for (; pairs < 10'000; ++pairs) {
    const std::size_t n = 1 + rng.Below(40);
    const int kind = pairs % 4;
    const double scale = kind == 2 ? 1e6 : kind == 3 ? 1e-6 : 1.0;
    auto c = RandomMatrix(n, rng, kind == 0, scale);
    if (pairs % 5 == 4 && n >= 2) c = Sparsify(c, 0.5 * rng.Uniform(), rng());
    std::vector<double> u(n);
    const double spread = std::pow(10.0, rng.Uniform(-8.0, 8.0));
    for (auto& x : u) x = rng.Uniform(-spread, spread);
    violations += CountFeasibilityViolations(c, MinTrick(c, u).duals, 0.0);
  }
  return {violations == 0, Fmt("%d fuzzed (C, u) pairs, %zu violations of u_i + v_j <= C_ij "
                               "(zero tolerance)",
                               pairs, violations)};
}

Outcome OptimalSeedIdle(Context& ctx) {
  const std::vector<std::size_t> sizes{16, 64, 256};
  std::vector<int> idle(100), equal(100);
  ParallelFor(100, ctx.threads, [&](std::size_t k) {
    auto inst = GenLabels(GenDense(sizes[k % 3], 30'000 + k));
    const auto seed = MinTrick(inst.c, inst.u_star).duals;
    auto r = SolveSeeded(inst.c, seed);
    idle[k] = r.stats.dual_update_steps == 0;
    equal[k] = r.duals == seed;
  });
  const int n_idle = std::accumulate(idle.begin(), idle.end(), 0);
  const int n_equal = std::accumulate(equal.begin(), equal.end(), 0);
  return {n_idle == 100 && n_equal == 100,
          Fmt("100 instances n in {16,64,256}: dual_update_steps = 0 in %d/100, returned duals "
              "equal the seed in %d/100",
              n_idle, n_equal)};
}

Outcome WorkReduction(Context& ctx) {
  const auto& model = ctx.Model();
  constexpr std::size_t kN = 512;
  constexpr int kCount = 20;
  std::vector<double> cold(kCount), oracle(kCount), neural(kCount);
  PipelineConfig no_fallback;
  no_fallback.tau = 0.0;
  ParallelFor(kCount, ctx.threads, [&](std::size_t k) {
    auto inst = GenLabels(GenDense(kN, 40'000 + k));
    cold[k] = SolveCold(inst.c).stats.greedy_matched / double(kN);
    oracle[k] = SolveFromRowSeed(inst.c, inst.u_star, no_fallback).report.solve_stats.greedy_matched /
                double(kN);
    neural[k] = WarmSolve(inst.c, model, no_fallback).report.solve_stats.greedy_matched / double(kN);
  });
  int oracle_ok = 0, neural_better = 0;
  for (int k = 0; k < kCount; ++k) {
    oracle_ok += oracle[k] >= 0.95 && oracle[k] > cold[k];
    neural_better += neural[k] > cold[k];
  }
  // Not gated: the same comparison at the training size.
  int better_at_train_n = 0;
  for (int k = 0; k < kCount; ++k) {
    auto c = GenDense(128, 45'000 + k);
    better_at_train_n += WarmSolve(c, model, no_fallback).report.solve_stats.greedy_matched >
                         SolveCold(c).stats.greedy_matched;
  }
  const bool pass = oracle_ok == kCount && neural_better >= 16;
  return {pass, Fmt("n=512 x20: greedy rate oracle mean %.4f (min %.4f), cold mean %.4f, "
                    "neural mean %.4f; oracle >= 0.95 and > cold on %d/20; neural > cold on "
                    "%d/20 (need 16); at the training size n=128, neural > cold on %d/20 "
                    "(not gated)",
                    MeanOf(oracle), *std::min_element(oracle.begin(), oracle.end()),
                    MeanOf(cold), MeanOf(neural), oracle_ok, neural_better, better_at_train_n)};
}

Outcome FallbackSensitivity(Context& ctx) {
  ExperimentSpec spec;
  spec.sizes = {256};
  spec.trials = 20;
  spec.seed = 5;
  spec.threads = ctx.threads;
  auto rows = SweepNoise(spec, {0.0, 0.05, 0.1, 0.2, 0.4});
  std::vector<double> rho, dus, fallback;
  for (const auto& r : rows) {
    rho.push_back(r.mean_rho);
    dus.push_back(r.mean_dual_update_steps);
    fallback.push_back(r.fallback_rate);
  }
  bool rho_dec = true, dus_inc = true;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    rho_dec = rho_dec && rho[k] < rho[k - 1];
    dus_inc = dus_inc && dus[k] > dus[k - 1];
  }
  return {rho_dec && dus_inc,
          Fmt("n=256 x20, sigma/range in {0,.05,.1,.2,.4}: mean rho %s strictly decreasing: %s; "
              "mean dual_update_steps %s strictly increasing: %s; fallback rate at tau=1.2 %s",
              Join(rho, "%.6f").c_str(), rho_dec ? "yes" : "no", Join(dus, "%.1f").c_str(),
              dus_inc ? "yes" : "no", Join(fallback, "%.2f").c_str())};
}

Outcome GradientCheck(Context&) {
  double worst = 0.0;
  int checked = 0, skipped = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ModelConfig cfg;
    cfg.hidden_dim = 8;
    cfg.refine_k = 3;
    auto inst = GenLabels(GenDense(6, 900 + seed));
    auto g = CheckGradient(ModelParams::Init(cfg, seed), inst, 0.1);
    worst = std::max(worst, g.max_rel_error);
    checked += g.checked;
    skipped += g.skipped;
  }
  return {worst <= 1e-4 && checked > 0,
          Fmt("n=6, H=8, K=3, d=21, 5 seeds: max relative error %.3g over %d coordinates "
              "(%d skipped at kinks), limit 1e-4",
              worst, checked, skipped)};
}

Outcome LearningEfficacy(Context& ctx) {
  const auto& model = ctx.Model();
  constexpr int kCount = 50;
  PipelineConfig no_fallback;
  no_fallback.tau = 0.0;
  std::vector<double> cold_dus(kCount), neural_dus(kCount), speedup(kCount);
  std::vector<int> exact(kCount);
  for (int k = 0; k < kCount; ++k) {  // sequential: wall times are reported
    auto c = GenDense(128, 80'000 + k);
    auto t0 = detail::Clock::now();
    auto cold = SolveCold(c);
    const double cold_ns = detail::ElapsedNs(t0);
    t0 = detail::Clock::now();
    auto warm = WarmSolve(c, model, no_fallback);
    const double warm_ns = detail::ElapsedNs(t0);
    cold_dus[k] = cold.stats.dual_update_steps;
    neural_dus[k] = DualUpdates(warm);
    speedup[k] = cold_ns / std::max(warm_ns, 1.0);
    exact[k] = SameCost(warm.report.total_cost, cold.assignment.total_cost);
  }
  const double ratio = MeanOf(neural_dus) / MeanOf(cold_dus);
  const int n_exact = std::accumulate(exact.begin(), exact.end(), 0);
  return {ratio <= 0.6 && n_exact == kCount,
          Fmt("trained on 200 dense n=128 (%d epochs, %.0f s); 50 held-out: mean "
              "dual_update_steps neural %.2f vs cold %.2f, ratio %.3f (limit 0.6); exact cost "
              "%d/50; wall speedup mean %.3f (not gated)",
              ctx.train_epochs, ctx.train_seconds, MeanOf(neural_dus), MeanOf(cold_dus), ratio,
              n_exact, MeanOf(speedup))};
}

Outcome OverheadScaling(Context& ctx) {
  const auto& model = ctx.Model();
  const PipelineConfig cfg;
  std::vector<double> medians;
  for (std::size_t n : {256, 512, 1024, 2048}) {
    WarmSolve(GenDense(n, 1), model, cfg);  // warm-up
    std::vector<double> ratios;
    for (int t = 0; t < 5; ++t) {
      auto w = WarmSolve(GenDense(n, 50'000 + n * 10 + t), model, cfg);
      ratios.push_back(static_cast<double>(w.report.OverheadNs()) /
                       std::max<double>(w.report.stage_times.at(kStageSolver), 1.0));
    }
    medians.push_back(MedianOf(ratios));
  }
  bool non_increasing = true;
  for (std::size_t k = 1; k < medians.size(); ++k) {
    non_increasing = non_increasing && medians[k] <= medians[k - 1];
  }
  return {non_increasing, Fmt("dense n in {256,512,1024,2048}, 5 trials: median overhead/solver "
                              "%s, non-increasing: %s",
                              Join(medians, "%.4f").c_str(), non_increasing ? "yes" : "no")};
}

Outcome BaselineSanity(Context& ctx) {
  const auto& model = ctx.Model();
  constexpr int kCount = 20;
  PipelineConfig no_fallback;
  no_fallback.tau = 0.0;
  const PipelineConfig gated;
  std::vector<double> random_dus(kCount), neural_dus(kCount), random_fb(kCount), mean_fb(kCount);
  ParallelFor(kCount, ctx.threads, [&](std::size_t k) {
    auto c = GenDense(256, 60'000 + k);
    auto u_rand = SeedRandom(c, k);
    random_dus[k] = DualUpdates(SolveFromRowSeed(c, u_rand, no_fallback));
    neural_dus[k] = DualUpdates(WarmSolve(c, model, no_fallback));
    random_fb[k] = SolveFromRowSeed(c, u_rand, gated).report.fallback_triggered;
    mean_fb[k] = SolveFromRowSeed(c, SeedRowMean(c), gated).report.fallback_triggered;
  });
  const bool pass = MeanOf(random_dus) >= MeanOf(neural_dus);
  return {pass, Fmt("n=256 x20 (model trained at n=128, seeds used without fallback): mean "
                    "dual_update_steps random %.2f >= neural %.2f: %s; fallback rate at tau=1.2 "
                    "random %.2f, row_mean %.2f",
                    MeanOf(random_dus), MeanOf(neural_dus), pass ? "yes" : "no",
                    MeanOf(random_fb), MeanOf(mean_fb))};
}

Outcome StatisticsEngine(Context&) {
  auto rec = [](const char* strategy, int trial, std::int64_t wall) {
    RunRecord r;
    r.strategy = strategy;
    r.generator = "synthetic";
    r.n = 8;
    r.trial = trial;
    r.wall_ns = wall;
    return r;
  };
  // Ratios 2, 1, 4.
  std::vector<RunRecord> rs{rec("cold", 0, 2), rec("x", 0, 1), rec("cold", 1, 2),
                            rec("x", 1, 2),    rec("cold", 2, 4), rec("x", 2, 1)};
  const auto x = Summarize(rs)[1];
  // Constant ratio 2.
  std::vector<RunRecord> twice;
  for (int t = 0; t < 4; ++t) {
    twice.push_back(rec("cold", t, 200 * (t + 1)));
    twice.push_back(rec("y", t, 100 * (t + 1)));
  }
  const auto y = Summarize(twice)[1];
  std::vector<RunRecord> walls{rec("cold", 0, 1), rec("cold", 1, 2), rec("cold", 2, 3)};
  const auto z = Summarize(walls)[0];
  auto close = [](double a, double b) { return std::abs(a - b) < 5e-7; };
  const bool pass = close(x.speedup_mean, 2.333333) && close(x.ci_high - x.ci_low, 3.457115) &&
                    close(x.speedup_median, 2.0) && close(y.speedup_mean, 2.0) &&
                    y.ci_high - y.ci_low == 0.0 && close(z.cv, 0.408248) &&
                    z.speedup_mean == 1.0;
  return {pass, Fmt("ratios {2,1,4}: mean %.6f (2.333333), CI width %.6f (3.457115), median "
                    "%.6f (2); ratio 2: mean %.6f, width %.6f; CV{1,2,3} %.6f (0.408248); "
                    "self-ratio %.6f",
                    x.speedup_mean, x.ci_high - x.ci_low, x.speedup_median, y.speedup_mean,
                    y.ci_high - y.ci_low, z.cv, z.speedup_mean)};
}

Outcome PermutationInvariance(Context& ctx) {
  ExperimentSpec spec;
  spec.sizes = {256};
  spec.seed = 11;
  spec.strategies = {"cold", "neural", "row_mean"};
  spec.pipeline.tau = 0.0;
  StrategyContext sc;
  sc.model = std::make_shared<ModelParams>(ctx.Model());
  std::vector<RunRecord> records;
  auto rows = SweepPermutation(spec, 10, sc, &records);
  std::set<double> costs;
  bool all_ok = true;
  for (const auto& r : records) {
    all_ok = all_ok && r.ok();
    costs.insert(r.total_cost);
  }
  std::string walls;
  for (const auto& r : rows) {
    walls += Fmt(" %s %.3f+-%.3f ms (CV %.3f);", r.strategy.c_str(), r.wall_mean_ns / 1e6,
                 r.wall_std_ns / 1e6, r.wall_cv);
  }
  return {all_ok && costs.size() == 1,
          Fmt("10 row permutations of one n=256 matrix x 3 strategies: %zu distinct cost "
              "value(s) over %zu runs; wall:%s",
              costs.size(), records.size(), walls.c_str())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> only, expect_fail;
  Context ctx;
  ctx.threads = ThreadsFromEnv();
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail")->delimiter(',');
  app.add_option("--train-epochs", ctx.train_epochs, "Epochs of the desk-scale training run");
  app.add_option("--save-model", ctx.save_model, "Write the trained model to this checkpoint");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "exactness of seeded solves", Exactness},
      {2, "min-trick feasibility", MinTrickFeasibility},
      {3, "optimal seed is idle", OptimalSeedIdle},
      {4, "work reduction (greedy match rate)", WorkReduction},
      {5, "fallback sensitivity to seed noise", FallbackSensitivity},
      {6, "gradient correctness", GradientCheck},
      {7, "learning efficacy at desk scale", LearningEfficacy},
      {8, "overhead scaling", OverheadScaling},
      {9, "baseline sanity", BaselineSanity},
      {10, "statistics engine", StatisticsEngine},
      {11, "permutation invariance of value", PermutationInvariance},
  };
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  int passed = 0, ran = 0, unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    const auto start = detail::Clock::now();
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = detail::ElapsedNs(start) / 1e9;
    ++ran;
    passed += o.pass;
    const bool known = expected.contains(c.id);
    if (!o.pass && !known) ++unexpected;
    std::printf("criterion %2d %s %s: %s [%.1f s]%s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs,
                !o.pass && known ? " (known failure)" : o.pass && known ? " (listed as known failure)" : "");
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass; %d unexpected failure(s)\n", passed, ran, unexpected);
  return unexpected == 0 ? 0 : 1;
}
