#pragma once

#include <utility>
#include <vector>

#include "pathmarket/interval_bundling.hpp"
#include "pathmarket/model.hpp"

namespace pm {

// Peak split of a path job under a fixed rooting: the peak holds the 1 or 2
// shallowest edges, and each arm descends from one peak edge.
struct ArmDecomposition {
  int job = 0;
  std::vector<int> peak;   // 1 or 2 edge ids, ascending
  std::vector<int> left;   // depth-increasing, starts at the lower-id peak edge
  std::vector<int> right;  // the other side; empty for monotone paths
};

ArmDecomposition decompose_arms(const TreeView& view, const Job& job);

// One monotone arm carried through the peeling recursion.
struct Arm {
  int job = 0;
  int side = 0;            // 0 left, 1 right
  std::vector<int> edges;  // depth-increasing
};

// Arms of every positive-weight job, in job order with the left arm first.
std::vector<Arm> collect_arms(const Instance& inst, const TreeView& view,
                              const FractionalAllocation& x);

// One peel round. kept (J) carries at most 7 weight per edge of its span,
// kept plus dropped (D) cover a full unit of weight on that span, and kept
// outweighs dropped two to one. siblings (D') lists remaining arms whose
// sibling arm was dropped.
struct PeelResult {
  std::vector<int> kept;
  std::vector<int> dropped;
  std::vector<int> siblings;
  std::vector<double> fw;  // per-edge weight of the input arm set
};

PeelResult peel(const TreeView& view, const std::vector<Arm>& arms,
                const FractionalAllocation& y);

struct TreeLayer {
  std::vector<std::pair<int, int>> copies;  // (edge, copy index)
  std::vector<std::pair<int, int>> arms;    // (job, side) pairs assigned here
};

// Arms of surviving jobs partition across layers, every layer keeps per-edge
// arm weight at most 1, and the copy sets partition the full edge multiset.
struct LayeredAllocation {
  int root = 0;
  std::vector<TreeLayer> layers;
  FractionalAllocation weights;                 // x/7 on survivors, else 0
  std::vector<std::pair<int, int>> job_layers;  // per job (left, right), -1 absent
};

LayeredAllocation build_layered_allocation(const Instance& inst,
                                           const FractionalAllocation& x, int root = 0);

ValidationReport validate_layered_allocation(const Instance& inst,
                                             const LayeredAllocation& la);

// Splits the support into dyadic value bands and keeps the most valuable one;
// the kept band retains a 1/ceil(log2 spread) share of the fractional value.
std::pair<std::vector<int>, FractionalAllocation> partition_value_classes(
    const Instance& inst, const FractionalAllocation& y);

// Value-banded supply split for trees with min capacity B >= 2: B/2 bands of
// width spread^(2/B), halved allocations, per-edge sub-supplies by the
// ceiling-of-half-weight rule. Below capacity 2 the instance passes through.
std::vector<MarketSegment> tree_large_market_split(const Instance& inst,
                                                   const FractionalAllocation& y);

}  // namespace pm
