#pragma once

#include <cstdint>
#include <vector>

#include "pathmarket/model.hpp"

namespace pm {

struct OracleBudget {
  std::int64_t max_realizations = std::int64_t{1} << 20;
  int max_search_jobs = 20;
};

struct HindsightResult {
  double value = 0;
  std::vector<int> chosen;  // job ids, at most one per buyer
};

// Best integral allocation for one realization: pick at most one realized job
// per buyer subject to item capacities; cost schedules charge per copy used.
// Unit-capacity, cost-free line realizations with one job per realized buyer
// go through an exact interval-scheduling DP; everything else through a
// pruned exhaustive search bounded by the budget.
HindsightResult hindsight_opt(const Instance& inst, const Realization& real,
                              const OracleBudget& budget = {});

// Expectation of hindsight_opt over the full realization product space.
double offline_opt_exact(const Instance& inst, const OracleBudget& budget = {});

// Same expectation in exact rational arithmetic, using the instances' exact
// value/probability fields. Always uses the exhaustive search.
Rat offline_opt_exact_rational(const Instance& inst, const OracleBudget& budget = {});

// Internal helpers exposed for oracle-vs-oracle tests.
HindsightResult hindsight_brute_force(const Instance& inst, const std::vector<int>& realized_jobs,
                                      const OracleBudget& budget);
bool hindsight_dp_applicable(const Instance& inst, const std::vector<int>& realized_jobs);
HindsightResult hindsight_interval_dp(const Instance& inst, const std::vector<int>& realized_jobs);

// Realized job ids for a realization, in buyer order.
std::vector<int> realized_jobs(const Instance& inst, const Realization& real);

// Greedy hindsight heuristic: realized jobs in descending value order (ties
// by ascending job id), taking a job when its buyer is unserved and every
// item on it still has a free copy. Cost schedules charge marginal copies.
HindsightResult hindsight_greedy_by_value(const Instance& inst, const Realization& real);

struct EstimateResult {
  double mean = 0;
  double se = 0;
};

// Monte Carlo stand-in for offline_opt_exact when the realization space is
// out of budget: per-trial realizations from generators derived from
// (seed, trial), each solved exactly by hindsight_opt.
EstimateResult offline_opt_estimate(const Instance& inst, long long trials, std::uint64_t seed,
                                    const OracleBudget& budget = {});

// Monte Carlo mean of the greedy hindsight heuristic over the same trial
// derivation.
EstimateResult greedy_offline_estimate(const Instance& inst, long long trials,
                                       std::uint64_t seed);

}  // namespace pm
