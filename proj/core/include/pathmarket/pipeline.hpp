#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathmarket/interval_bundling.hpp"
#include "pathmarket/model.hpp"
#include "pathmarket/oracles.hpp"
#include "pathmarket/simulation.hpp"
#include "pathmarket/tree_layering.hpp"

namespace pm {

enum class PipelineMode { interval, interval_costs, tree };

const char* pipeline_mode_name(PipelineMode mode);
PipelineMode parse_pipeline_mode(const std::string& name);

// Interval bundling rule the pipeline applies: the five-step construction on
// unit capacities, otherwise the better of the layered and band-split
// builders by carried value.
UnitAllocation pipeline_interval_allocation(const Instance& inst, const FractionalAllocation& x,
                                            int max_offsets = kDefaultOffsets);

// Tree rule: keep the best dyadic value band, then layer it.
LayeredAllocation pipeline_tree_allocation(const Instance& inst, const FractionalAllocation& x,
                                           int root = 0);

// Shortest decimal form that parses back to the same double; identical
// across runs, so CSV outputs stay byte-stable.
std::string format_double(double v);

// End-to-end run parameters: relax, bundle or layer, price, simulate, and
// compare against the oracles. Seeds are explicit so every run replays.
struct BenchmarkConfig {
  std::string label;     // instance name carried into report and plot rows
  double parameter = 0;  // sweep key (L, B, ...) for plot rows
  PipelineMode mode = PipelineMode::interval;
  int max_offsets = kDefaultOffsets;
  long long trials = 0;  // 0 plays the worst-case order instead of sampling
  ArrivalPolicy policy = ArrivalPolicy::adversarial_exhaustive();
  std::uint64_t seed = 1;
  long long order_cap = kOrderCap;
  long long scenario_cap = kScenarioSpaceCap;
  OracleBudget opt_budget;
  long long opt_mc_trials = 0;  // Monte Carlo Opt fallback when out of budget
  long long greedy_trials = 0;  // greedy-offline estimate when positive
};

struct StageTime {
  std::string stage;
  double seconds = 0;
};

// One pipeline run. Ratios are reported against both denominators when both
// exist: the LP bound always, the exact optimum only within budget; keeping
// both separates integrality slack from pricing loss.
struct BenchmarkReport {
  std::string label;
  PipelineMode mode = PipelineMode::interval;
  double parameter = 0;
  double frac_opt = 0;
  bool has_exact_opt = false;
  double exact_opt = 0;
  bool has_opt_estimate = false;
  EstimateResult opt_estimate;
  bool has_greedy_offline = false;
  EstimateResult greedy_offline;
  double welfare = 0;     // worst-case exact value or Monte Carlo mean
  double welfare_se = 0;  // zero outside Monte Carlo
  bool worst_case = false;
  bool exhaustive = false;  // adversarial search covered every order
  double ratio_frac = 0;    // frac_opt / welfare
  bool has_ratio_exact = false;
  double ratio_exact = 0;
  std::vector<StageTime> timings;
};

// Stage failures propagate with the stage name prefixed; an out-of-budget
// exact optimum degrades to the Monte Carlo estimate instead of failing.
BenchmarkReport run_pipeline(const Instance& inst, const BenchmarkConfig& config);

// One row per report, one header line. Timings are deliberately excluded so
// reruns with the same seeds stay byte-identical.
std::string report_csv(const std::vector<BenchmarkReport>& reports);

// Long-format plot rows keyed by instance and sweep parameter.
std::string emit_plot_data(const std::vector<BenchmarkReport>& reports);

}  // namespace pm
