#include "pathmarket/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "pathmarket/error.hpp"

namespace pm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Item span of a bundle; every item in [lo, hi] must appear exactly once.
std::pair<int, int> bundle_span(const UnitBundle& b, int k) {
  if (b.copies.empty()) fail(ErrorKind::invalid_input, "menu bundle " + std::to_string(k) + " is empty");
  int lo = b.copies.front().first, hi = lo;
  for (const auto& [t, r] : b.copies) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (hi - lo + 1 != static_cast<int>(b.copies.size()))
    fail(ErrorKind::invalid_input,
         "menu bundle " + std::to_string(k) + " does not cover an item interval");
  std::vector<char> seen(hi - lo + 1, 0);
  for (const auto& [t, r] : b.copies) {
    if (seen[t - lo])
      fail(ErrorKind::invalid_input,
           "menu bundle " + std::to_string(k) + " holds an item twice");
    seen[t - lo] = 1;
  }
  return {lo, hi};
}

IntervalBundle checked_interval_query(const Bundle& query, int items) {
  const auto* iv = std::get_if<IntervalBundle>(&query);
  if (!iv) fail(ErrorKind::invalid_input, "interval menu quotes interval queries only");
  if (iv->first < 0 || iv->last < iv->first || iv->last >= items)
    fail(ErrorKind::invalid_input, "query interval out of range");
  return *iv;
}

// Carried support of each bundle plus the FGL price over it.
struct PricedBundles {
  std::vector<UnitBundle> bundles;
  std::vector<double> prices;
  std::vector<int> source;  // original bundle index per menu entry
};

PricedBundles fgl_prices(const Instance& inst, const UnitAllocation& ua,
                         const std::vector<double>& values) {
  int nb = static_cast<int>(ua.bundles.size());
  std::vector<std::vector<int>> carried(nb);
  for (int j = 0; j < inst.job_count(); ++j) {
    int k = ua.assignment[j];
    if (k >= 0 && ua.weights[j] > kTol) carried[k].push_back(j);
  }
  PricedBundles out;
  for (int k = 0; k < nb; ++k) {
    if (carried[k].empty()) continue;
    double w = frac_weight(ua.weights, carried[k]);
    if (w <= kTol)
      fail(ErrorKind::numerical, "bundle " + std::to_string(k) + " carries support without weight");
    double val = 0;
    for (int j : carried[k]) val += values[j] * ua.weights[j];
    bundle_span(ua.bundles[k], k);
    out.bundles.push_back(ua.bundles[k]);
    out.prices.push_back(val / (2 * w));
    out.source.push_back(k);
  }
  return out;
}

}  // namespace

IntervalMenuState make_state(const IntervalMenu& menu) {
  IntervalMenuState st;
  st.sold.assign(menu.bundles.size(), 0);
  return st;
}

IntervalMenu price_unit_allocation(const Instance& inst, const UnitAllocation& ua) {
  ValidationReport rep = validate_unit_allocation(inst, ua);
  if (!rep.ok()) fail(ErrorKind::invalid_input, "unit allocation invalid: " + rep.problems.front());
  std::vector<double> values(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) values[j] = inst.jobs[j].value;
  PricedBundles pb = fgl_prices(inst, ua, values);
  IntervalMenu menu;
  menu.items = inst.item_count();
  menu.bundles = std::move(pb.bundles);
  menu.prices = std::move(pb.prices);
  return menu;
}

QuoteResult quote(const IntervalMenu& menu, const Bundle& query, const IntervalMenuState& state) {
  IntervalBundle iv = checked_interval_query(query, menu.items);
  int m = static_cast<int>(menu.bundles.size());
  if (state.sold.size() != menu.bundles.size())
    fail(ErrorKind::invalid_input, "menu state size mismatch");
  // Min-cost cover of [first, last]. Covering a longer prefix never gets
  // cheaper, so each bundle may extend the exact prefix ending at its start.
  int n = iv.last - iv.first + 1;
  std::vector<double> dp(n + 1, kInf);
  std::vector<int> choice(n + 1, -1);
  dp[0] = 0;
  std::vector<std::pair<int, int>> clipped(m, {0, -1});
  for (int k = 0; k < m; ++k) {
    if (state.sold[k]) continue;
    auto [lo, hi] = bundle_span(menu.bundles[k], k);
    clipped[k] = {std::max(lo, iv.first), std::min(hi, iv.last)};
  }
  for (int e = 1; e <= n; ++e) {
    int item = iv.first + e - 1;
    for (int k = 0; k < m; ++k) {
      auto [a, b] = clipped[k];
      if (state.sold[k] || a > item || item > b) continue;
      double cand = dp[a - iv.first] + menu.prices[k];
      if (cand < dp[e]) {
        dp[e] = cand;
        choice[e] = k;
      }
    }
  }
  QuoteResult res;
  if (!(dp[n] < kInf)) return res;
  res.available = true;
  res.price = dp[n];
  for (int e = n; e > 0;) {
    int k = choice[e];
    res.entries.push_back(k);
    e = clipped[k].first - iv.first;
  }
  std::sort(res.entries.begin(), res.entries.end());
  return res;
}

TreeMenuState make_state(const TreeMenu& menu) {
  TreeMenuState st;
  st.sold.resize(menu.copies.size());
  for (size_t k = 0; k < menu.copies.size(); ++k) st.sold[k].assign(menu.copies[k].size(), 0);
  return st;
}

TreeMenu price_layered_allocation(const Instance& inst, const LayeredAllocation& la) {
  const auto* topo = std::get_if<TreeTopology>(&inst.topology);
  if (!topo) fail(ErrorKind::invalid_input, "tree menu requires a tree instance");
  ValidationReport rep = validate_layered_allocation(inst, la);
  if (!rep.ok()) fail(ErrorKind::invalid_input, "layered allocation invalid: " + rep.problems.front());

  TreeMenu menu;
  menu.view = build_tree_view(*topo, la.root);
  int nl = static_cast<int>(la.layers.size());
  menu.copies.resize(nl);
  menu.prices.resize(nl);
  for (int k = 0; k < nl; ++k) {
    menu.copies[k] = la.layers[k].copies;
    menu.prices[k].assign(menu.copies[k].size(), 0.0);
  }

  double vmin = kInf;
  for (int j = 0; j < inst.job_count(); ++j)
    if (la.weights[j] > kTol) vmin = std::min(vmin, inst.jobs[j].value);
  if (!(vmin < kInf)) fail(ErrorKind::invalid_input, "layered allocation has no support");
  if (vmin <= kTol) fail(ErrorKind::numerical, "supported job value too small to normalize");
  menu.scale = vmin;

  double mass = 0, half_value = 0;
  for (int j = 0; j < inst.job_count(); ++j) {
    if (la.weights[j] <= kTol) continue;
    double contrib = 0.25 * la.weights[j] * inst.jobs[j].value;
    half_value += 0.5 * la.weights[j] * inst.jobs[j].value;
    ArmDecomposition d = decompose_arms(menu.view, inst.jobs[j]);
    for (int side = 0; side < 2; ++side) {
      int k = side == 0 ? la.job_layers[j].first : la.job_layers[j].second;
      const std::vector<int>& edges = side == 0 ? d.left : d.right;
      if (k < 0) continue;
      if (edges.empty())
        fail(ErrorKind::invalid_input, "job " + std::to_string(j) + " lacks its assigned arm");
      int peak = edges.front();
      auto& layer = menu.copies[k];
      auto it = std::find_if(layer.begin(), layer.end(),
                             [&](const std::pair<int, int>& c) { return c.first == peak; });
      if (it == layer.end())
        fail(ErrorKind::invalid_input,
             "peak edge of job " + std::to_string(j) + " missing from its layer");
      menu.prices[k][it - layer.begin()] += contrib;
      mass += contrib;
    }
  }
  if (mass > half_value + kTol)
    fail(ErrorKind::numerical, "peak price mass exceeds half the fractional value");
  return menu;
}

TreeQuote quote(const TreeMenu& menu, const Bundle& query, const TreeMenuState& state) {
  if (!std::holds_alternative<PathBundle>(query))
    fail(ErrorKind::invalid_input, "tree menu quotes path queries only");
  if (state.sold.size() != menu.copies.size())
    fail(ErrorKind::invalid_input, "menu state size mismatch");
  Job probe;
  probe.id = -1;
  probe.bundle = query;
  ArmDecomposition d = decompose_arms(menu.view, probe);

  TreeQuote res;
  double total = 0;
  std::vector<std::pair<int, int>> taken;
  for (int side = 0; side < 2; ++side) {
    const std::vector<int>& edges = side == 0 ? d.left : d.right;
    if (edges.empty()) continue;
    double best = kInf;
    std::vector<std::pair<int, int>> best_taken;
    for (size_t k = 0; k < menu.copies.size(); ++k) {
      const auto& layer = menu.copies[k];
      double sum = 0;
      bool ok = true;
      std::vector<std::pair<int, int>> picks;
      for (int e : edges) {
        auto it = std::find_if(layer.begin(), layer.end(),
                               [&](const std::pair<int, int>& c) { return c.first == e; });
        int idx = it == layer.end() ? -1 : static_cast<int>(it - layer.begin());
        if (idx < 0 || state.sold[k][idx]) {
          ok = false;
          break;
        }
        sum += menu.prices[k][idx];
        picks.push_back({static_cast<int>(k), idx});
      }
      if (!ok) continue;
      double floored = std::max(menu.scale, sum);
      if (floored < best) {
        best = floored;
        best_taken = std::move(picks);
      }
    }
    if (!(best < kInf)) return res;
    total += best;
    taken.insert(taken.end(), best_taken.begin(), best_taken.end());
  }
  res.available = true;
  res.price = total;
  res.taken = std::move(taken);
  return res;
}

CostMenuState make_state(const CostAwareMenu& menu) {
  CostMenuState st;
  st.sold.assign(menu.bundles.size(), 0);
  return st;
}

CostAwareMenu price_with_costs(const Instance& inst, const CostAwareUnit& cau) {
  ValidationReport rep = validate_unit_allocation(inst, cau.alloc);
  if (!rep.ok()) fail(ErrorKind::invalid_input, "unit allocation invalid: " + rep.problems.front());
  if (static_cast<int>(cau.shifted_values.size()) != inst.job_count())
    fail(ErrorKind::invalid_input, "shifted value vector size mismatch");
  PricedBundles pb = fgl_prices(inst, cau.alloc, cau.shifted_values);
  CostAwareMenu menu;
  menu.items = inst.item_count();
  menu.bundles = std::move(pb.bundles);
  menu.base_prices = std::move(pb.prices);
  menu.copy_costs.resize(menu.bundles.size());
  for (size_t k = 0; k < menu.bundles.size(); ++k) {
    for (const auto& [t, r] : menu.bundles[k].copies) {
      const auto& costs = inst.items[t].costs;
      menu.copy_costs[k].push_back(r < static_cast<int>(costs.size()) ? costs[r] : 0.0);
    }
  }
  return menu;
}

QuoteResult quote(const CostAwareMenu& menu, const Bundle& query, const CostMenuState& state) {
  IntervalBundle iv = checked_interval_query(query, menu.items);
  if (state.sold.size() != menu.bundles.size())
    fail(ErrorKind::invalid_input, "menu state size mismatch");
  QuoteResult res;
  for (size_t k = 0; k < menu.bundles.size(); ++k) {
    if (state.sold[k]) continue;
    auto [lo, hi] = bundle_span(menu.bundles[k], static_cast<int>(k));
    if (lo > iv.first || iv.last > hi) continue;
    double surcharge = 0;
    const auto& copies = menu.bundles[k].copies;
    for (size_t i = 0; i < copies.size(); ++i)
      if (copies[i].first >= iv.first && copies[i].first <= iv.last)
        surcharge += menu.copy_costs[k][i];
    double listed = menu.base_prices[k] + surcharge;
    if (!res.available || listed < res.price) {
      res.available = true;
      res.price = listed;
      res.surcharge = surcharge;
      res.entries = {static_cast<int>(k)};
    }
  }
  return res;
}

}  // namespace pm
