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

// Run records and the statistics computed over them: mean-of-ratios
// speedup with a normal-approximation interval, coefficient of variation,
// work-reduction metrics and per-stage time breakdowns.

#ifndef DUALSEED_STATS_HPP_
#define DUALSEED_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "dualseed/error.hpp"
#include "dualseed/warmstart.hpp"

namespace dualseed {

struct RunRecord {
  std::string strategy;
  std::string generator;
  std::size_t n = 0;
  int trial = 0;
  std::uint64_t instance_seed = 0;
  double total_cost = 0.0;
  std::int64_t wall_ns = 0;
  std::map<std::string, std::int64_t> stage_times;
  double density_rho = 0.0;
  bool fallback_triggered = false;
  int greedy_matched = 0;
  int free_rows = 0;
  int augment_searches = 0;
  int dual_update_steps = 0;
  double greedy_match_rate = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }

  void SetStats(const SolveStats& s) {
    greedy_matched = s.greedy_matched;
    free_rows = s.free_rows;
    augment_searches = s.augment_searches;
    dual_update_steps = s.dual_update_steps;
    greedy_match_rate = n > 0 ? static_cast<double>(s.greedy_matched) / static_cast<double>(n) : 0.0;
  }
};

inline nlohmann::json ToJson(const RunRecord& r) {
  return {{"strategy", r.strategy},
          {"generator", r.generator},
          {"n", r.n},
          {"trial", r.trial},
          {"instance_seed", r.instance_seed},
          {"total_cost", r.total_cost},
          {"wall_ns", r.wall_ns},
          {"stage_times", r.stage_times},
          {"density_rho", r.density_rho},
          {"fallback_triggered", r.fallback_triggered},
          {"greedy_matched", r.greedy_matched},
          {"free_rows", r.free_rows},
          {"augment_searches", r.augment_searches},
          {"dual_update_steps", r.dual_update_steps},
          {"greedy_match_rate", r.greedy_match_rate},
          {"error", r.error}};
}

inline RunRecord RunRecordFromJson(const nlohmann::json& j) {
  RunRecord r;
  try {
    j.at("strategy").get_to(r.strategy);
    j.at("generator").get_to(r.generator);
    j.at("n").get_to(r.n);
    j.at("trial").get_to(r.trial);
    j.at("instance_seed").get_to(r.instance_seed);
    j.at("total_cost").get_to(r.total_cost);
    j.at("wall_ns").get_to(r.wall_ns);
    j.at("stage_times").get_to(r.stage_times);
    j.at("density_rho").get_to(r.density_rho);
    j.at("fallback_triggered").get_to(r.fallback_triggered);
    j.at("greedy_matched").get_to(r.greedy_matched);
    j.at("free_rows").get_to(r.free_rows);
    j.at("augment_searches").get_to(r.augment_searches);
    j.at("dual_update_steps").get_to(r.dual_update_steps);
    j.at("greedy_match_rate").get_to(r.greedy_match_rate);
    j.at("error").get_to(r.error);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("bad run record: ") + e.what());
  }
  return r;
}

inline double MeanOf(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double PopulationStdOf(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const double m = MeanOf(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

inline double SampleStdOf(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = MeanOf(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

inline double MedianOf(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size();
  return m % 2 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
}

// std / mean with the population std.
inline double CoefficientOfVariation(std::span<const double> xs) {
  const double m = MeanOf(xs);
  return m == 0.0 ? 0.0 : PopulationStdOf(xs) / m;
}

inline constexpr double kZ95 = 1.96;

struct SummaryRow {
  std::string strategy;
  std::string generator;
  std::size_t n = 0;
  int trials = 0;
  double speedup_mean = 0.0;  // mean over instances of T_baseline / T_strategy
  double ci_low = 0.0;
  double ci_high = 0.0;
  double speedup_median = 0.0;
  double cv = 0.0;
  double wall_mean_ns = 0.0;
  double wall_min_ns = 0.0;
  double wall_max_ns = 0.0;
  double greedy_rate_mean = 0.0;
  double augment_reduction = 0.0;  // mean of 1 - searches / baseline searches
  double dual_update_steps_mean = 0.0;
  double fallback_rate = 0.0;
};

// One row per (generator, n, strategy). Each strategy record is paired with
// the baseline record of the same (generator, n, trial); cells with fewer
// than two pairs cannot carry an interval and raise kInsufficientTrials.
inline std::vector<SummaryRow> Summarize(std::span<const RunRecord> records,
                                         const std::string& baseline = "cold") {
  using Key = std::tuple<std::string, std::size_t, int>;
  std::map<Key, const RunRecord*> base;
  for (const auto& r : records) {
    if (r.ok() && r.strategy == baseline) base[{r.generator, r.n, r.trial}] = &r;
  }
  using Cell = std::tuple<std::string, std::size_t, std::string>;
  std::map<Cell, std::vector<std::pair<const RunRecord*, const RunRecord*>>> cells;
  std::vector<Cell> order;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    auto it = base.find({r.generator, r.n, r.trial});
    if (it == base.end()) continue;
    Cell cell{r.generator, r.n, r.strategy};
    if (!cells.contains(cell)) order.push_back(cell);
    cells[cell].push_back({&r, it->second});
  }
  std::vector<SummaryRow> out;
  for (const auto& cell : order) {
    const auto& pairs = cells[cell];
    if (pairs.size() < 2) {
      throw Error(ErrorCode::kInsufficientTrials,
                  "strategy '" + std::get<2>(cell) + "' at n = " +
                      std::to_string(std::get<1>(cell)) + " has " +
                      std::to_string(pairs.size()) + " trial(s); at least 2 needed");
    }
    SummaryRow row;
    row.generator = std::get<0>(cell);
    row.n = std::get<1>(cell);
    row.strategy = std::get<2>(cell);
    row.trials = static_cast<int>(pairs.size());
    std::vector<double> ratios, walls, greedy, reduction, dus;
    double fallbacks = 0.0;
    for (const auto& [r, b] : pairs) {
      ratios.push_back(r->wall_ns > 0 ? static_cast<double>(b->wall_ns) / static_cast<double>(r->wall_ns)
                                      : 0.0);
      walls.push_back(static_cast<double>(r->wall_ns));
      greedy.push_back(r->greedy_match_rate);
      dus.push_back(r->dual_update_steps);
      reduction.push_back(b->augment_searches > 0
                              ? 1.0 - static_cast<double>(r->augment_searches) / b->augment_searches
                              : 0.0);
      fallbacks += r->fallback_triggered ? 1.0 : 0.0;
    }
    const double m = static_cast<double>(pairs.size());
    row.speedup_mean = MeanOf(ratios);
    const double half = kZ95 * SampleStdOf(ratios) / std::sqrt(m);
    row.ci_low = row.speedup_mean - half;
    row.ci_high = row.speedup_mean + half;
    row.speedup_median = MedianOf(ratios);
    row.cv = CoefficientOfVariation(walls);
    row.wall_mean_ns = MeanOf(walls);
    row.wall_min_ns = *std::min_element(walls.begin(), walls.end());
    row.wall_max_ns = *std::max_element(walls.begin(), walls.end());
    row.greedy_rate_mean = MeanOf(greedy);
    row.augment_reduction = MeanOf(reduction);
    row.dual_update_steps_mean = MeanOf(dus);
    row.fallback_rate = fallbacks / m;
    out.push_back(row);
  }
  return out;
}

inline constexpr const char* kSummaryHeader =
    "generator,n,strategy,trials,speedup_mean,ci_low,ci_high,speedup_median,cv,"
    "wall_mean_ns,wall_min_ns,wall_max_ns,greedy_rate_mean,augment_reduction,"
    "dual_update_steps_mean,fallback_rate";

inline std::string CsvFields(const SummaryRow& r) {
  std::ostringstream os;
  os << std::setprecision(10) << r.generator << ',' << r.n << ',' << r.strategy << ','
     << r.trials << ',' << r.speedup_mean << ',' << r.ci_low << ',' << r.ci_high << ','
     << r.speedup_median << ',' << r.cv << ',' << r.wall_mean_ns << ',' << r.wall_min_ns
     << ',' << r.wall_max_ns << ',' << r.greedy_rate_mean << ',' << r.augment_reduction
     << ',' << r.dual_update_steps_mean << ',' << r.fallback_rate;
  return os.str();
}

inline std::string SummaryCsv(std::span<const SummaryRow> rows) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const auto& r : rows) out += CsvFields(r) + "\n";
  return out;
}

struct BreakdownRow {
  std::string strategy;
  std::size_t n = 0;
  int runs = 0;
  std::map<std::string, double> mean_ms;
  std::map<std::string, double> percent;
  double total_ms = 0.0;
};

// Mean time and share per pipeline stage for each (strategy, n). Every
// record must carry all five stages.
inline std::vector<BreakdownRow> BreakdownTable(std::span<const RunRecord> records) {
  std::map<std::pair<std::string, std::size_t>, std::vector<const RunRecord*>> groups;
  std::vector<std::pair<std::string, std::size_t>> order;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    for (const char* s : kStageNames) {
      if (!r.stage_times.contains(s)) {
        throw Error(ErrorCode::kInvalidInput, "record for '" + r.strategy +
                                                  "' lacks stage '" + s + "'");
      }
    }
    std::pair<std::string, std::size_t> key{r.strategy, r.n};
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<BreakdownRow> out;
  for (const auto& key : order) {
    const auto& rs = groups[key];
    BreakdownRow row;
    row.strategy = key.first;
    row.n = key.second;
    row.runs = static_cast<int>(rs.size());
    for (const char* s : kStageNames) {
      double sum = 0.0;
      for (const auto* r : rs) sum += static_cast<double>(r->stage_times.at(s));
      row.mean_ms[s] = sum / static_cast<double>(rs.size()) / 1e6;
      row.total_ms += row.mean_ms[s];
    }
    for (const char* s : kStageNames) {
      row.percent[s] = row.total_ms > 0.0 ? 100.0 * row.mean_ms[s] / row.total_ms : 0.0;
    }
    out.push_back(row);
  }
  return out;
}

inline std::string BreakdownCsv(std::span<const BreakdownRow> rows) {
  std::ostringstream os;
  os << "strategy,n,runs";
  for (const char* s : kStageNames) os << ',' << s << "_ms," << s << "_pct";
  os << ",total_ms\n" << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.strategy << ',' << r.n << ',' << r.runs;
    for (const char* s : kStageNames) os << ',' << r.mean_ms.at(s) << ',' << r.percent.at(s);
    os << ',' << r.total_ms << '\n';
  }
  return os.str();
}

// Cells (generator, n, trial) whose successful records disagree on cost.
inline std::vector<std::string> CostDisagreements(std::span<const RunRecord> records) {
  std::map<std::tuple<std::string, std::size_t, int>, std::vector<const RunRecord*>> cells;
  for (const auto& r : records) {
    if (r.ok()) cells[{r.generator, r.n, r.trial}].push_back(&r);
  }
  std::vector<std::string> out;
  for (const auto& [key, rs] : cells) {
    for (const auto* r : rs) {
      if (r->total_cost != rs.front()->total_cost) {
        out.push_back(std::get<0>(key) + " n=" + std::to_string(std::get<1>(key)) +
                      " trial=" + std::to_string(std::get<2>(key)) + ": " + r->strategy +
                      " vs " + rs.front()->strategy);
      }
    }
  }
  return out;
}

}  // namespace dualseed

#endif  // DUALSEED_STATS_HPP_
