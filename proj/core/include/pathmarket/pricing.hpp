#pragma once

#include <utility>
#include <vector>

#include "pathmarket/interval_bundling.hpp"
#include "pathmarket/model.hpp"
#include "pathmarket/tree_layering.hpp"

namespace pm {

// Static anonymous menu over disjoint item-copy bundles, each spanning a
// contiguous item run. Sold flags live in IntervalMenuState, not here.
struct IntervalMenu {
  int items = 0;                    // item count of the priced instance
  std::vector<UnitBundle> bundles;  // nonempty, pairwise copy-disjoint
  std::vector<double> prices;       // aligned, finite, nonnegative
};

struct IntervalMenuState {
  std::vector<char> sold;  // per menu entry
};

IntervalMenuState make_state(const IntervalMenu& menu);

// Priced answer to a single query. entries lists the menu entries a purchase
// would take; surcharge is the cost-covering part of the price (cost menus).
struct QuoteResult {
  bool available = false;
  double price = 0;
  double surcharge = 0;
  std::vector<int> entries;
};

// Bundle k sells at FracVal(x'_{A_k}) / (2 FracWt(x'_{A_k})) over its carried
// support A_k; bundles carrying no support are omitted.
IntervalMenu price_unit_allocation(const Instance& inst, const UnitAllocation& ua);

// Cheapest union of unsold bundles covering the query interval, priced
// additively; unavailable when no such union exists.
QuoteResult quote(const IntervalMenu& menu, const Bundle& query, const IntervalMenuState& state);

// Per-layer additive edge-copy prices for monotone path bundles, in original
// value units. scale is the rescale that would normalize the minimum
// supported value to 1; the per-arm price floor sits at scale so the menu
// equals the normalized mechanism replayed in original units. Any bundle
// that is not a monotone path inside a single layer is unavailable.
struct TreeMenu {
  TreeView view;     // rooting the layers were built under
  double scale = 1;  // minimum supported job value
  std::vector<std::vector<std::pair<int, int>>> copies;  // per layer (edge, copy)
  std::vector<std::vector<double>> prices;               // aligned peak prices
};

struct TreeMenuState {
  std::vector<std::vector<char>> sold;  // aligned with TreeMenu::copies
};

TreeMenuState make_state(const TreeMenu& menu);

struct TreeQuote {
  bool available = false;
  double price = 0;  // sum over arms of max(scale, arm total)
  std::vector<std::pair<int, int>> taken;  // (layer, copy position) per edge
};

// Each surviving arm adds a quarter of its weighted value to its peak edge
// copy; every other copy prices at 0. Total price mass stays at or below
// half the fractional value.
TreeMenu price_layered_allocation(const Instance& inst, const LayeredAllocation& la);

// Splits the query path into arms at the menu rooting; each arm takes the
// cheapest layer holding all its edges unsold, floored at scale per arm.
TreeQuote quote(const TreeMenu& menu, const Bundle& query, const TreeMenuState& state);

// Adaptive cost-covering menu: an interval I of bundle tau_k lists at the
// shifted-value base price plus the production cost of tau_k's copies inside
// I. Selling any interval of tau_k removes the whole bundle from the menu.
struct CostAwareMenu {
  int items = 0;
  std::vector<UnitBundle> bundles;              // tau_k, nonempty
  std::vector<double> base_prices;              // p'_k, shifted-value FGL prices
  std::vector<std::vector<double>> copy_costs;  // aligned with bundle copies
};

struct CostMenuState {
  std::vector<char> sold;  // per bundle; a sale removes every interval of it
};

CostMenuState make_state(const CostAwareMenu& menu);

CostAwareMenu price_with_costs(const Instance& inst, const CostAwareUnit& cau);

// Cheapest unsold bundle whose item span contains the query, at base plus
// surcharge; single-bundle by design since every carried job fits one bundle.
QuoteResult quote(const CostAwareMenu& menu, const Bundle& query, const CostMenuState& state);

}  // namespace pm
