#pragma once

#include <utility>
#include <vector>

#include "pathmarket/model.hpp"

namespace pm {

// A bundle owns a set of item copies; (t, r) is the r-th copy of item t.
struct UnitBundle {
  std::vector<std::pair<int, int>> copies;
};

// Fractional unit allocation: bundles partition the item-copy multiset, every
// carried job sits in one bundle containing its interval, and the carried
// weight per bundle is at most 1.
struct UnitAllocation {
  std::vector<UnitBundle> bundles;
  std::vector<int> assignment;   // job id -> bundle index, -1 when dropped
  FractionalAllocation weights;  // rescaled allocation x'
};

double unit_allocation_value(const Instance& inst, const UnitAllocation& ua);
double unit_allocation_value(const Instance& inst, const UnitAllocation& ua,
                             const std::vector<double>& values);
ValidationReport validate_unit_allocation(const Instance& inst, const UnitAllocation& ua);

// Root of beta log2(beta) = log2(length), clamped below at 2.
double compute_beta(int length);

// Jobs worth at least half the fractional value of their own interval.
std::vector<int> filter_low_value(const Instance& inst, const FractionalAllocation& x);

// One contiguous component of the jobs sharing a (length scale, cell, value
// scale) bucket at a fixed offset.
struct JobGroup {
  int level = 0;            // length scale; job lengths lie in (2^(level-2), 2^(level-1)]
  long long cell = 0;       // cell index at that scale
  int value_scale = 0;      // job values lie in (2^(a-1), 2^a]
  int component = 0;
  std::vector<int> jobs;
  int lo = 0, hi = -1;      // covered item interval
  double weight = 0, value = 0;
};

// Buckets the surviving jobs into dyadic cells at offset t0; jobs straddling
// a cell boundary at their scale are dropped.
std::vector<JobGroup> bucket_jobs(const Instance& inst, const FractionalAllocation& x,
                                  const std::vector<int>& u1, long long t0);

// Splits group indices by weight threshold 1/(6 beta): (heavy, light).
std::pair<std::vector<int>, std::vector<int>> classify_heavy_light(
    const std::vector<JobGroup>& groups, double beta);

// Two internally disjoint subfamilies (as index lists) that jointly cover the
// union of the input intervals.
std::pair<std::vector<int>, std::vector<int>> interval_cover(
    const std::vector<std::pair<int, int>>& intervals);

UnitAllocation build_heavy_unit_allocation(const Instance& inst, const FractionalAllocation& x,
                                           const std::vector<JobGroup>& groups,
                                           const std::vector<int>& heavy);

// Subset of one cell's light jobs with weight <= 1/beta and at least a sixth
// of the cell's value.
std::vector<int> select_light_subset(const Instance& inst, const FractionalAllocation& x,
                                     const std::vector<int>& cell_jobs, double beta);

UnitAllocation build_light_unit_allocation(const Instance& inst, const FractionalAllocation& x,
                                           const std::vector<JobGroup>& groups,
                                           const std::vector<int>& light, double beta,
                                           long long t0);

// Ceiling on the evenly spaced derandomized offsets tried per segment.
inline constexpr int kDefaultOffsets = 64;

// Full five-step construction over a derandomized offset set; unit capacities.
UnitAllocation build_unit_allocation(const Instance& inst, const FractionalAllocation& x,
                                     int max_offsets = kDefaultOffsets);

// Earliest-uncovered-item, latest-ending-job greedy. For every item, the
// selected weight reaches min{1, capacity} unless the set already holds every
// positive-weight job there, and always stays below 4.
std::vector<int> greedy_layer(const Instance& inst, const FractionalAllocation& x,
                              const std::vector<int>& capacities);

// Peels greedy layers until max capacity is at most 4; each layer carries a
// quarter of its jobs' weight and the layers jointly keep a quarter of the
// value.
std::vector<FractionalAllocation> layer_allocation(const Instance& inst,
                                                   const FractionalAllocation& x);

// One sub-market of the length-banded supply split.
struct MarketSegment {
  std::vector<int> jobs;            // the length band
  FractionalAllocation allocation;  // halved input allocation on those jobs
  std::vector<int> capacities;      // per-item supply carved out for the band
  std::vector<int> copy_offset;     // first original copy index per item
};

std::vector<MarketSegment> large_market_split(const Instance& inst,
                                              const FractionalAllocation& x);

// Layering plus per-layer five-step bundling; arbitrary capacities.
UnitAllocation build_layered_unit_allocation(const Instance& inst,
                                             const FractionalAllocation& x,
                                             int max_offsets = kDefaultOffsets);

// Length-banded split, per-band layered bundling, merged over band copies.
UnitAllocation build_large_market_allocation(const Instance& inst,
                                             const FractionalAllocation& x,
                                             int max_offsets = kDefaultOffsets);

// Cost mode: per layer r, values shift down by the copy-r costs along the
// job's interval; non-positive jobs drop out. shifted_values holds the
// layer-shifted value for every assigned job (0 for dropped jobs).
struct CostAwareUnit {
  UnitAllocation alloc;
  std::vector<double> shifted_values;
};

CostAwareUnit unit_allocation_with_costs(const Instance& inst, const FractionalAllocation& x,
                                         int max_offsets = kDefaultOffsets);

}  // namespace pm
