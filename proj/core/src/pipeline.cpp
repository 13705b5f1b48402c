#include "pathmarket/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "pathmarket/error.hpp"
#include "pathmarket/pricing.hpp"
#include "pathmarket/relaxation.hpp"
#include "pathmarket/tree_layering.hpp"

namespace pm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs one stage, records its wall time, and prefixes the stage name onto
// any failure so callers see where the pipeline stopped.
template <class F>
auto stage(const char* name, std::vector<StageTime>& times, F&& fn) {
  Clock::time_point start = Clock::now();
  try {
    auto result = fn();
    times.push_back({name, seconds_since(start)});
    return result;
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  }
}

double safe_ratio(double bound, double welfare) {
  if (welfare > kTol) return bound / welfare;
  return bound <= kTol ? 1.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

const char* pipeline_mode_name(PipelineMode mode) {
  switch (mode) {
    case PipelineMode::interval:
      return "interval";
    case PipelineMode::interval_costs:
      return "interval-costs";
    case PipelineMode::tree:
      return "tree";
  }
  return "interval";
}

PipelineMode parse_pipeline_mode(const std::string& name) {
  if (name == "interval") return PipelineMode::interval;
  if (name == "interval-costs") return PipelineMode::interval_costs;
  if (name == "tree") return PipelineMode::tree;
  fail(ErrorKind::invalid_input, "unknown pipeline mode: " + name);
}

UnitAllocation pipeline_interval_allocation(const Instance& inst, const FractionalAllocation& x,
                                            int max_offsets) {
  if (max_capacity(inst) <= 1) return build_unit_allocation(inst, x, max_offsets);
  UnitAllocation layered = build_layered_unit_allocation(inst, x, max_offsets);
  UnitAllocation banded = build_large_market_allocation(inst, x, max_offsets);
  double lv = unit_allocation_value(inst, layered);
  double bv = unit_allocation_value(inst, banded);
  return bv > lv ? banded : layered;
}

LayeredAllocation pipeline_tree_allocation(const Instance& inst, const FractionalAllocation& x,
                                           int root) {
  auto [band, y] = partition_value_classes(inst, x);
  return build_layered_allocation(inst, y, root);
}

BenchmarkReport run_pipeline(const Instance& inst, const BenchmarkConfig& config) {
  ValidationReport vr = validate_instance(inst);
  if (!vr.ok()) fail(ErrorKind::invalid_input, "instance: " + vr.problems.front());
  if (config.mode == PipelineMode::tree && inst.is_line())
    fail(ErrorKind::invalid_input, "tree mode requires a tree instance");
  if (config.mode != PipelineMode::tree && !inst.is_line())
    fail(ErrorKind::invalid_input, "interval modes require a line instance");

  BenchmarkReport rep;
  rep.label = config.label;
  rep.mode = config.mode;
  rep.parameter = config.parameter;

  LpSolution lp = stage("relax", rep.timings, [&] {
    LpSolution s = config.mode == PipelineMode::interval_costs ? solve_frac_opt_with_costs(inst)
                                                               : solve_frac_opt(inst);
    if (s.status != LpSolution::Status::optimal)
      fail(ErrorKind::numerical, "relaxation did not reach an optimum");
    return s;
  });
  rep.frac_opt = lp.objective;

  bool priced = frac_weight(lp.allocation) > kTol;
  Menu menu;
  if (priced) {
    switch (config.mode) {
      case PipelineMode::interval: {
        UnitAllocation ua = stage("bundle", rep.timings, [&] {
          return pipeline_interval_allocation(inst, lp.allocation, config.max_offsets);
        });
        menu = stage("price", rep.timings, [&] { return price_unit_allocation(inst, ua); });
        break;
      }
      case PipelineMode::interval_costs: {
        CostAwareUnit cau = stage("bundle", rep.timings, [&] {
          return unit_allocation_with_costs(inst, lp.allocation, config.max_offsets);
        });
        menu = stage("price", rep.timings, [&] { return price_with_costs(inst, cau); });
        break;
      }
      case PipelineMode::tree: {
        LayeredAllocation la = stage("layer", rep.timings, [&] {
          return pipeline_tree_allocation(inst, lp.allocation);
        });
        if (frac_weight(la.weights) <= kTol) {
          priced = false;
          break;
        }
        menu = stage("price", rep.timings, [&] { return price_layered_allocation(inst, la); });
        break;
      }
    }
  }

  if (priced && config.trials == 0) {
    WorstCaseResult wc = stage("simulate", rep.timings, [&] {
      return worst_case_order_welfare(inst, menu, config.order_cap, config.scenario_cap);
    });
    rep.welfare = wc.value;
    rep.worst_case = true;
    rep.exhaustive = wc.exhaustive;
  } else if (priced) {
    MonteCarloResult mc = stage("simulate", rep.timings, [&] {
      return monte_carlo_welfare(inst, menu, config.policy, config.trials, config.seed);
    });
    rep.welfare = mc.mean;
    rep.welfare_se = mc.se;
  } else {
    rep.worst_case = config.trials == 0;
    rep.exhaustive = rep.worst_case;
  }

  int oracle_probe = stage("oracle", rep.timings, [&] {
    try {
      rep.exact_opt = offline_opt_exact(inst, config.opt_budget);
      rep.has_exact_opt = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::budget_exceeded) throw;
      if (config.opt_mc_trials > 0) {
        rep.opt_estimate =
            offline_opt_estimate(inst, config.opt_mc_trials, config.seed, config.opt_budget);
        rep.has_opt_estimate = true;
      }
    }
    if (config.greedy_trials > 0) {
      rep.greedy_offline = greedy_offline_estimate(inst, config.greedy_trials, config.seed);
      rep.has_greedy_offline = true;
    }
    return 0;
  });
  (void)oracle_probe;

  rep.ratio_frac = safe_ratio(rep.frac_opt, rep.welfare);
  if (rep.has_exact_opt) {
    rep.ratio_exact = safe_ratio(rep.exact_opt, rep.welfare);
    rep.has_ratio_exact = true;
  }
  return rep;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail(ErrorKind::numerical, "value does not format");
  return std::string(buf, ptr);
}

namespace {

void append_row(std::string& out, const BenchmarkReport& r) {
  out += r.label;
  out += ',';
  out += pipeline_mode_name(r.mode);
  out += ',';
  out += format_double(r.parameter);
  out += ',';
  out += format_double(r.frac_opt);
  out += ',';
  if (r.has_exact_opt) out += format_double(r.exact_opt);
  out += ',';
  if (r.has_opt_estimate) out += format_double(r.opt_estimate.mean);
  out += ',';
  if (r.has_opt_estimate) out += format_double(r.opt_estimate.se);
  out += ',';
  if (r.has_greedy_offline) out += format_double(r.greedy_offline.mean);
  out += ',';
  if (r.has_greedy_offline) out += format_double(r.greedy_offline.se);
  out += ',';
  out += format_double(r.welfare);
  out += ',';
  out += format_double(r.welfare_se);
  out += ',';
  out += r.worst_case ? '1' : '0';
  out += ',';
  out += r.exhaustive ? '1' : '0';
  out += ',';
  out += format_double(r.ratio_frac);
  out += ',';
  if (r.has_ratio_exact) out += format_double(r.ratio_exact);
  out += '\n';
}

}  // namespace

std::string report_csv(const std::vector<BenchmarkReport>& reports) {
  std::string out =
      "label,mode,parameter,frac_opt,exact_opt,opt_estimate,opt_estimate_se,"
      "greedy_offline,greedy_offline_se,welfare,welfare_se,worst_case,exhaustive,"
      "ratio_frac,ratio_exact\n";
  for (const BenchmarkReport& r : reports) append_row(out, r);
  return out;
}

std::string emit_plot_data(const std::vector<BenchmarkReport>& reports) {
  if (reports.empty()) fail(ErrorKind::invalid_input, "plot data needs at least one report");
  std::string out = "instance,parameter,ratio,welfare,bound\n";
  for (const BenchmarkReport& r : reports) {
    out += r.label;
    out += ',';
    out += format_double(r.parameter);
    out += ',';
    out += format_double(r.ratio_frac);
    out += ',';
    out += format_double(r.welfare);
    out += ',';
    out += format_double(r.frac_opt);
    out += '\n';
  }
  return out;
}

}  // namespace pm
