#pragma once

#include <cstdint>

#include "pathmarket/model.hpp"

namespace pm {

// Single item, one certain buyer of value 1 and one rare buyer of value
// 1/epsilon arriving with probability epsilon. Offline welfare tends to 2
// while any posted pricing gets at most 1.
Instance gen_footnote_single_item(const Rat& eps);

// n_items unit-capacity items; buyer 1 is unit-demand at value 1 (one job per
// item inside a single scenario), buyer 2 wants the whole line at value
// n_items - eps. Separates item pricing from bundle pricing.
Instance gen_footnote_item_pricing(int n_items, const Rat& eps);

// Complete binary tree of the given height, unit capacities. Edge levels
// count from the leaves: for each level-l edge and each leaf edge below it
// there is one buyer wanting that downward path, value 2^l, probability 2^-l.
// Exactly height * 2^height buyers.
Instance gen_tree_lower_bound(int height);

struct RandomIntervalParams {
  int items = 8;
  int buyers = 4;
  int scenarios = 2;           // max scenarios per buyer
  int jobs_per_scenario = 2;   // max jobs per scenario
  int max_len = 4;
  double value_lo = 1;
  double value_hi = 8;
  int cap_lo = 1;
  int cap_hi = 1;
  bool with_costs = false;  // when set, items draw non-decreasing cost schedules
  std::uint64_t seed = 1;
};
Instance gen_random_interval(const RandomIntervalParams& params);

struct RandomTreeParams {
  int edges = 8;
  int buyers = 4;
  int scenarios = 2;
  double value_lo = 1;
  double value_hi = 8;
  int cap_lo = 1;
  int cap_hi = 1;
  std::uint64_t seed = 1;
};
Instance gen_random_tree(const RandomTreeParams& params);

}  // namespace pm
