#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pathmarket/error.hpp"
#include "pathmarket/generators.hpp"
#include "pathmarket/interval_bundling.hpp"
#include "pathmarket/pricing.hpp"
#include "pathmarket/tree_layering.hpp"
#include "test_support.hpp"

using namespace pm;

namespace {

// Line instance with one deterministic buyer per job.
Instance line_inst(int items, const std::vector<std::tuple<int, int, double>>& jobs,
                   std::vector<int> caps = {}) {
  Instance inst;
  inst.topology = LineTopology{items};
  if (caps.empty()) caps.assign(items, 1);
  inst.items.resize(items);
  for (int t = 0; t < items; ++t) inst.items[t].capacity = caps[t];
  for (const auto& [first, last, value] : jobs)
    pm_test::append_deterministic_buyer(inst, IntervalBundle{first, last}, value);
  return inst;
}

// Tree instance with one deterministic buyer per job.
Instance tree_inst(std::vector<int> parents, std::vector<int> caps,
                   const std::vector<std::pair<std::vector<int>, double>>& jobs) {
  Instance inst;
  inst.topology = TreeTopology{std::move(parents)};
  inst.items.resize(caps.size());
  for (std::size_t t = 0; t < caps.size(); ++t) inst.items[t].capacity = caps[t];
  for (const auto& [edges, value] : jobs)
    pm_test::append_deterministic_buyer(inst, PathBundle{edges}, value);
  return inst;
}

// Feasible by construction: per item, the jobs through it share its capacity.
FractionalAllocation scaled_feasible(const Instance& inst) {
  std::vector<int> count(inst.item_count(), 0);
  for (const Job& job : inst.jobs)
    for (int t : job_items(job)) ++count[t];
  FractionalAllocation x(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) {
    double lim = 1.0;
    for (int t : job_items(inst.jobs[j]))
      lim = std::min(lim, static_cast<double>(inst.items[t].capacity) / count[t]);
    x[j] = 0.97 * lim;
  }
  return x;
}

UnitBundle copies_of(std::vector<std::pair<int, int>> c) {
  UnitBundle b;
  b.copies = std::move(c);
  return b;
}

// Star instance from the layered-allocation walkthrough: a three-edge stem
// into a hub with capacity 90 and a fan of single-edge continuations.
Instance figure_instance() {
  std::vector<int> parents(103, 2);
  parents[0] = 0;
  parents[1] = 1;
  parents[2] = 2;
  parents[3] = 3;
  std::vector<int> caps(103, 1);
  caps[1] = 90;
  std::vector<std::pair<std::vector<int>, double>> jobs;
  jobs.push_back({{0, 1, 2}, 1.0});
  for (int i = 1; i <= 99; ++i) jobs.push_back({{1, 3 + i}, 1.0});
  jobs.push_back({{3}, 1.0});
  return tree_inst(parents, caps, jobs);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  REQUIRE(false);
  return ErrorKind::invalid_input;
}

}  // namespace

TEST_CASE("a lone carried job prices its bundle at half its value") {
  Instance inst = line_inst(1, {{0, 0, 10.0}});
  UnitAllocation ua;
  ua.bundles = {copies_of({{0, 0}})};
  ua.assignment = {0};
  ua.weights = FractionalAllocation(1);
  ua.weights[0] = 1.0;
  IntervalMenu menu = price_unit_allocation(inst, ua);
  REQUIRE(menu.bundles.size() == 1);
  CHECK(menu.items == 1);
  CHECK(menu.prices[0] == doctest::Approx(5.0));
  CHECK(menu.bundles[0].copies == std::vector<std::pair<int, int>>{{0, 0}});
}

TEST_CASE("a bundle price averages carried value over twice the carried weight") {
  Instance inst = line_inst(1, {{0, 0, 4.0}, {0, 0, 8.0}});
  UnitAllocation ua;
  ua.bundles = {copies_of({{0, 0}})};
  ua.assignment = {0, 0};
  ua.weights = FractionalAllocation(2);
  ua.weights[0] = 0.5;
  ua.weights[1] = 0.5;
  IntervalMenu menu = price_unit_allocation(inst, ua);
  REQUIRE(menu.bundles.size() == 1);
  CHECK(menu.prices[0] == doctest::Approx(3.0));
}

TEST_CASE("bundles without carried support leave the menu") {
  Instance inst = line_inst(2, {{0, 0, 5.0}, {1, 1, 3.0}});
  UnitAllocation ua;
  ua.bundles = {copies_of({{0, 0}}), copies_of({{1, 0}})};
  ua.assignment = {0, 1};
  ua.weights = FractionalAllocation(2);
  ua.weights[0] = 1.0;
  ua.weights[1] = 0.0;  // assigned but weightless: not part of the support
  IntervalMenu menu = price_unit_allocation(inst, ua);
  REQUIRE(menu.bundles.size() == 1);
  CHECK(menu.bundles[0].copies == std::vector<std::pair<int, int>>{{0, 0}});
  CHECK(menu.prices[0] == doctest::Approx(2.5));
}

TEST_CASE("broken unit allocations are rejected up front") {
  Instance inst = line_inst(1, {{0, 0, 5.0}});
  UnitAllocation ua;  // no bundles at all: the supply copy is unassigned
  ua.assignment = {-1};
  ua.weights = FractionalAllocation(1);
  CHECK(kind_of([&] { price_unit_allocation(inst, ua); }) == ErrorKind::invalid_input);
}

TEST_CASE("menu prices satisfy the half-value identity on random instances") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    RandomIntervalParams params;
    params.items = 10;
    params.buyers = 5;
    params.scenarios = 2;
    params.jobs_per_scenario = 2;
    params.max_len = 4;
    params.seed = seed;
    Instance inst = gen_random_interval(params);
    FractionalAllocation x = scaled_feasible(inst);
    UnitAllocation ua = build_unit_allocation(inst, x);
    IntervalMenu menu = price_unit_allocation(inst, ua);
    CHECK(menu.items == inst.item_count());

    std::size_t pos = 0;
    for (std::size_t k = 0; k < ua.bundles.size(); ++k) {
      std::vector<int> carried;
      for (int j = 0; j < inst.job_count(); ++j)
        if (ua.assignment[j] == static_cast<int>(k) && ua.weights[j] > kTol) carried.push_back(j);
      if (carried.empty()) continue;
      REQUIRE(pos < menu.bundles.size());
      CHECK(menu.bundles[pos].copies == ua.bundles[k].copies);
      double w = frac_weight(ua.weights, carried);
      double val = frac_value(inst, ua.weights, carried);
      CHECK(menu.prices[pos] * 2 * w == doctest::Approx(val).epsilon(1e-12));
      CHECK(menu.prices[pos] >= 0);
      ++pos;
    }
    CHECK(pos == menu.bundles.size());
  }
}

TEST_CASE("quotes price exact bundles and unions additively") {
  Instance inst = line_inst(4, {{0, 1, 6.0}, {2, 3, 4.0}});
  UnitAllocation ua;
  ua.bundles = {copies_of({{0, 0}, {1, 0}}), copies_of({{2, 0}, {3, 0}})};
  ua.assignment = {0, 1};
  ua.weights = FractionalAllocation(2);
  ua.weights[0] = 1.0;
  ua.weights[1] = 1.0;
  IntervalMenu menu = price_unit_allocation(inst, ua);
  IntervalMenuState st = make_state(menu);

  QuoteResult exact = quote(menu, Bundle(IntervalBundle{0, 1}), st);
  CHECK(exact.available);
  CHECK(exact.price == doctest::Approx(3.0));
  CHECK(exact.entries == std::vector<int>{0});

  QuoteResult both = quote(menu, Bundle(IntervalBundle{0, 3}), st);
  CHECK(both.available);
  CHECK(both.price == doctest::Approx(5.0));
  CHECK(both.entries == std::vector<int>{0, 1});

  // Straddling query: the union overshoots the query on both sides.
  QuoteResult straddle = quote(menu, Bundle(IntervalBundle{1, 2}), st);
  CHECK(straddle.available);
  CHECK(straddle.price == doctest::Approx(5.0));

  st.sold[0] = 1;
  CHECK_FALSE(quote(menu, Bundle(IntervalBundle{0, 1}), st).available);
  CHECK_FALSE(quote(menu, Bundle(IntervalBundle{0, 3}), st).available);
  QuoteResult rest = quote(menu, Bundle(IntervalBundle{2, 3}), st);
  CHECK(rest.available);
  CHECK(rest.price == doctest::Approx(2.0));
}

TEST_CASE("quotes find the cheapest covering union") {
  IntervalMenu menu;
  menu.items = 3;
  menu.bundles = {copies_of({{0, 0}, {1, 0}}), copies_of({{1, 1}, {2, 0}}),
                  copies_of({{0, 1}, {1, 2}, {2, 1}})};
  menu.prices = {1.0, 1.0, 3.0};
  IntervalMenuState st = make_state(menu);

  QuoteResult res = quote(menu, Bundle(IntervalBundle{0, 2}), st);
  CHECK(res.available);
  CHECK(res.price == doctest::Approx(2.0));
  CHECK(res.entries == std::vector<int>{0, 1});

  menu.prices[2] = 1.5;
  res = quote(menu, Bundle(IntervalBundle{0, 2}), st);
  CHECK(res.price == doctest::Approx(1.5));
  CHECK(res.entries == std::vector<int>{2});

  // A sold middle layer reroutes the cover through the wide bundle.
  menu.prices[2] = 3.0;
  st.sold[1] = 1;
  res = quote(menu, Bundle(IntervalBundle{0, 2}), st);
  CHECK(res.price == doctest::Approx(3.0));
  CHECK(res.entries == std::vector<int>{2});

  IntervalMenu gap;
  gap.items = 3;
  gap.bundles = {copies_of({{0, 0}}), copies_of({{2, 0}})};
  gap.prices = {1.0, 1.0};
  IntervalMenuState gst = make_state(gap);
  CHECK_FALSE(quote(gap, Bundle(IntervalBundle{0, 2}), gst).available);
  CHECK(quote(gap, Bundle(IntervalBundle{2, 2}), gst).price == doctest::Approx(1.0));
}

TEST_CASE("interval quotes reject malformed queries") {
  IntervalMenu menu;
  menu.items = 3;
  menu.bundles = {copies_of({{0, 0}, {1, 0}, {2, 0}})};
  menu.prices = {1.0};
  IntervalMenuState st = make_state(menu);
  CHECK(kind_of([&] { quote(menu, Bundle(IntervalBundle{2, 1}), st); }) ==
        ErrorKind::invalid_input);
  CHECK(kind_of([&] { quote(menu, Bundle(IntervalBundle{-1, 1}), st); }) ==
        ErrorKind::invalid_input);
  CHECK(kind_of([&] { quote(menu, Bundle(IntervalBundle{0, 3}), st); }) ==
        ErrorKind::invalid_input);
  CHECK(kind_of([&] { quote(menu, Bundle(PathBundle{{0}}), st); }) == ErrorKind::invalid_input);
}

TEST_CASE("a tree peak carries a quarter of its job's weighted value") {
  Instance inst = tree_inst({0}, {1}, {{{0}, 1.0}});
  LayeredAllocation la;
  la.root = 0;
  la.layers.resize(1);
  la.layers[0].copies = {{0, 0}};
  la.layers[0].arms = {{0, 0}};
  la.weights = FractionalAllocation(1);
  la.weights[0] = 1.0;
  la.job_layers = {{0, -1}};
  TreeMenu menu = price_layered_allocation(inst, la);
  CHECK(menu.scale == doctest::Approx(1.0));
  REQUIRE(menu.prices.size() == 1);
  CHECK(menu.prices[0][0] == doctest::Approx(0.25));

  TreeMenuState st = make_state(menu);
  TreeQuote q = quote(menu, Bundle(PathBundle{{0}}), st);
  CHECK(q.available);
  CHECK(q.price == doctest::Approx(1.0));  // floored at the value scale
  CHECK(q.taken == std::vector<std::pair<int, int>>{{0, 0}});
}

TEST_CASE("jobs sharing a peak edge stack their contributions") {
  Instance inst = tree_inst({0}, {1}, {{{0}, 2.0}, {{0}, 4.0}});
  LayeredAllocation la;
  la.root = 0;
  la.layers.resize(1);
  la.layers[0].copies = {{0, 0}};
  la.layers[0].arms = {{0, 0}, {1, 0}};
  la.weights = FractionalAllocation(2);
  la.weights[0] = 0.5;
  la.weights[1] = 0.25;
  la.job_layers = {{0, -1}, {0, -1}};
  TreeMenu menu = price_layered_allocation(inst, la);
  CHECK(menu.prices[0][0] == doctest::Approx(0.5));
  CHECK(menu.scale == doctest::Approx(2.0));

  // The arm floor sits at the value scale, not at the raw unit.
  TreeMenuState st = make_state(menu);
  TreeQuote q = quote(menu, Bundle(PathBundle{{0}}), st);
  CHECK(q.price == doctest::Approx(2.0));
}

TEST_CASE("a straddling path pays the floor once per arm") {
  Instance inst = tree_inst({0, 0}, {1, 1}, {{{0, 1}, 1.0}});
  LayeredAllocation la;
  la.root = 0;
  la.layers.resize(1);
  la.layers[0].copies = {{0, 0}, {1, 0}};
  la.layers[0].arms = {{0, 0}, {0, 1}};
  la.weights = FractionalAllocation(1);
  la.weights[0] = 1.0;
  la.job_layers = {{0, 0}};
  TreeMenu menu = price_layered_allocation(inst, la);
  CHECK(menu.prices[0][0] == doctest::Approx(0.25));
  CHECK(menu.prices[0][1] == doctest::Approx(0.25));

  TreeMenuState st = make_state(menu);
  TreeQuote q = quote(menu, Bundle(PathBundle{{0, 1}}), st);
  CHECK(q.available);
  CHECK(q.price == doctest::Approx(2.0));
  CHECK(q.taken.size() == 2);
}

TEST_CASE("sold copies push an arm to the next layer and then out") {
  Instance inst = tree_inst({0}, {2}, {{{0}, 1.0}, {{0}, 1.0}});
  LayeredAllocation la;
  la.root = 0;
  la.layers.resize(2);
  la.layers[0].copies = {{0, 0}};
  la.layers[0].arms = {{0, 0}};
  la.layers[1].copies = {{0, 1}};
  la.layers[1].arms = {{1, 0}};
  la.weights = FractionalAllocation(2);
  la.weights[0] = 1.0;
  la.weights[1] = 1.0;
  la.job_layers = {{0, -1}, {1, -1}};
  TreeMenu menu = price_layered_allocation(inst, la);

  TreeMenuState st = make_state(menu);
  TreeQuote q = quote(menu, Bundle(PathBundle{{0}}), st);
  CHECK(q.taken == std::vector<std::pair<int, int>>{{0, 0}});
  st.sold[0][0] = 1;
  q = quote(menu, Bundle(PathBundle{{0}}), st);
  CHECK(q.available);
  CHECK(q.taken == std::vector<std::pair<int, int>>{{1, 0}});
  st.sold[1][0] = 1;
  CHECK_FALSE(quote(menu, Bundle(PathBundle{{0}}), st).available);
}

TEST_CASE("an arm picks the cheapest layer holding all its edges") {
  TreeMenu menu;
  menu.view = build_tree_view(TreeTopology{{0}}, 0);
  menu.scale = 1.0;
  menu.copies = {{{0, 0}}, {{0, 1}}};
  menu.prices = {{5.0}, {3.0}};
  TreeMenuState st = make_state(menu);
  TreeQuote q = quote(menu, Bundle(PathBundle{{0}}), st);
  CHECK(q.price == doctest::Approx(3.0));
  CHECK(q.taken == std::vector<std::pair<int, int>>{{1, 0}});
  st.sold[1][0] = 1;
  q = quote(menu, Bundle(PathBundle{{0}}), st);
  CHECK(q.price == doctest::Approx(5.0));
}

TEST_CASE("paths spanning layers are unavailable") {
  Instance inst = tree_inst({0, 1}, {1, 1}, {{{0}, 1.0}, {{1}, 1.0}});
  LayeredAllocation la;
  la.root = 0;
  la.layers.resize(2);
  la.layers[0].copies = {{0, 0}};
  la.layers[0].arms = {{0, 0}};
  la.layers[1].copies = {{1, 0}};
  la.layers[1].arms = {{1, 0}};
  la.weights = FractionalAllocation(2);
  la.weights[0] = 1.0;
  la.weights[1] = 1.0;
  la.job_layers = {{0, -1}, {1, -1}};
  TreeMenu menu = price_layered_allocation(inst, la);

  TreeMenuState st = make_state(menu);
  CHECK(quote(menu, Bundle(PathBundle{{0}}), st).available);
  CHECK(quote(menu, Bundle(PathBundle{{1}}), st).available);
  CHECK_FALSE(quote(menu, Bundle(PathBundle{{0, 1}}), st).available);
}

TEST_CASE("tree quotes reject malformed queries") {
  Instance inst = tree_inst({0, 1, 2, 3}, {1, 1, 1, 1}, {{{0}, 1.0}});
  LayeredAllocation la;
  la.root = 0;
  la.layers.resize(1);
  la.layers[0].copies = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  la.layers[0].arms = {{0, 0}};
  la.weights = FractionalAllocation(1);
  la.weights[0] = 1.0;
  la.job_layers = {{0, -1}};
  TreeMenu menu = price_layered_allocation(inst, la);
  TreeMenuState st = make_state(menu);
  CHECK(kind_of([&] { quote(menu, Bundle(IntervalBundle{0, 0}), st); }) ==
        ErrorKind::invalid_input);
  CHECK(kind_of([&] { quote(menu, Bundle(PathBundle{}), st); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { quote(menu, Bundle(PathBundle{{0, 2}}), st); }) ==
        ErrorKind::invalid_input);
  CHECK(kind_of([&] { quote(menu, Bundle(PathBundle{{0, 9}}), st); }) ==
        ErrorKind::invalid_input);
}

TEST_CASE("the hub walkthrough menu concentrates price on the shared edge") {
  Instance inst = figure_instance();
  FractionalAllocation x(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) x[j] = 0.9;
  LayeredAllocation la = build_layered_allocation(inst, x);
  TreeMenu menu = price_layered_allocation(inst, la);
  CHECK(menu.scale == doctest::Approx(1.0));

  auto price_at = [&](int layer, int edge) {
    const auto& layer_copies = menu.copies[layer];
    for (std::size_t i = 0; i < layer_copies.size(); ++i)
      if (layer_copies[i].first == edge) return menu.prices[layer][i];
    REQUIRE(false);
    return 0.0;
  };
  // Layer 0 carries three fan jobs peaking at the hub edge plus the solo
  // job; survivors keep a seventh of their input weight.
  double quarter = 0.25 * 0.9 / 7;
  CHECK(price_at(0, 1) == doctest::Approx(3 * quarter));
  CHECK(price_at(0, 3) == doctest::Approx(quarter));
  CHECK(price_at(0, 4) == doctest::Approx(0.0));
  CHECK(price_at(1, 1) == doctest::Approx(3 * quarter));

  double mass = 0;
  for (const auto& layer : menu.prices)
    for (double p : layer) mass += p;
  CHECK(mass == doctest::Approx(77 * quarter));
  CHECK(mass <= 0.5 * frac_value(inst, la.weights) + 1e-9);

  // A fan path rides layer 0 until the hub copy sells, then leaves the menu
  // because its own fan edge has no second copy.
  TreeMenuState st = make_state(menu);
  TreeQuote q = quote(menu, Bundle(PathBundle{{1, 4}}), st);
  CHECK(q.available);
  CHECK(q.price == doctest::Approx(1.0));
  for (const auto& [layer, idx] : q.taken) CHECK(layer == 0);
  for (const auto& [layer, idx] : q.taken) st.sold[layer][idx] = 1;
  CHECK_FALSE(quote(menu, Bundle(PathBundle{{1, 4}}), st).available);
  TreeQuote fan5 = quote(menu, Bundle(PathBundle{{1, 5}}), st);
  CHECK_FALSE(fan5.available);  // the hub copy of layer 0 is gone
  TreeQuote solo = quote(menu, Bundle(PathBundle{{3}}), st);
  CHECK(solo.available);
  CHECK(solo.price == doctest::Approx(1.0));
}

TEST_CASE("tree menus reproduce the peak sums on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomTreeParams params;
    params.edges = 8;
    params.buyers = 30;
    params.scenarios = 2;
    params.value_lo = 1;
    params.value_hi = 8;
    params.cap_lo = 2;
    params.cap_hi = 3;
    params.seed = seed;
    Instance inst = gen_random_tree(params);
    FractionalAllocation x = scaled_feasible(inst);
    LayeredAllocation la = build_layered_allocation(inst, x);
    TreeMenu menu = price_layered_allocation(inst, la);

    double vmin = 0;
    bool first = true;
    std::map<std::pair<int, int>, double> expect;
    for (int j = 0; j < inst.job_count(); ++j) {
      if (la.weights[j] <= kTol) continue;
      if (first || inst.jobs[j].value < vmin) vmin = inst.jobs[j].value;
      first = false;
      ArmDecomposition d = decompose_arms(menu.view, inst.jobs[j]);
      if (la.job_layers[j].first >= 0)
        expect[{la.job_layers[j].first, d.left.front()}] += 0.25 * la.weights[j] * inst.jobs[j].value;
      if (la.job_layers[j].second >= 0)
        expect[{la.job_layers[j].second, d.right.front()}] +=
            0.25 * la.weights[j] * inst.jobs[j].value;
    }
    CHECK(menu.scale == doctest::Approx(vmin));

    double mass = 0;
    for (std::size_t k = 0; k < menu.copies.size(); ++k)
      for (std::size_t i = 0; i < menu.copies[k].size(); ++i) {
        auto it = expect.find({static_cast<int>(k), menu.copies[k][i].first});
        double want = it == expect.end() ? 0.0 : it->second;
        CHECK(menu.prices[k][i] == doctest::Approx(want).epsilon(1e-12));
        mass += menu.prices[k][i];
      }
    CHECK(mass <= 0.5 * frac_value(inst, la.weights) + 1e-9);

    // Every surviving job can buy its own path from a fresh menu.
    TreeMenuState st = make_state(menu);
    for (int j = 0; j < inst.job_count(); ++j) {
      if (la.weights[j] <= kTol) continue;
      TreeQuote q = quote(menu, inst.jobs[j].bundle, st);
      CHECK(q.available);
      CHECK(q.price >= menu.scale - 1e-12);
    }
  }
}

TEST_CASE("line instances cannot be priced as trees") {
  Instance inst = line_inst(2, {{0, 1, 1.0}});
  LayeredAllocation la;
  CHECK(kind_of([&] { price_layered_allocation(inst, la); }) == ErrorKind::invalid_input);
}

TEST_CASE("cost menus list the shifted base plus the copy costs") {
  Instance inst = line_inst(1, {{0, 0, 10.0}}, {2});
  inst.items[0].costs = {0.0, 2.0};
  CostAwareUnit cau;
  cau.alloc.bundles = {copies_of({{0, 0}}), copies_of({{0, 1}})};
  cau.alloc.assignment = {1};
  cau.alloc.weights = FractionalAllocation(1);
  cau.alloc.weights[0] = 1.0;
  cau.shifted_values = {8.0};
  CostAwareMenu menu = price_with_costs(inst, cau);
  REQUIRE(menu.bundles.size() == 1);
  CHECK(menu.base_prices[0] == doctest::Approx(4.0));
  CHECK(menu.copy_costs[0] == std::vector<double>{2.0});

  CostMenuState st = make_state(menu);
  QuoteResult q = quote(menu, Bundle(IntervalBundle{0, 0}), st);
  CHECK(q.available);
  CHECK(q.price == doctest::Approx(6.0));
  CHECK(q.surcharge == doctest::Approx(2.0));
  CHECK(q.entries == std::vector<int>{0});
}

TEST_CASE("zero costs collapse the cost menu onto the static one") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomIntervalParams params;
    params.items = 8;
    params.buyers = 4;
    params.scenarios = 2;
    params.jobs_per_scenario = 2;
    params.max_len = 3;
    params.cap_lo = 1;
    params.cap_hi = 2;
    params.seed = seed;
    Instance inst = gen_random_interval(params);
    FractionalAllocation x = scaled_feasible(inst);
    CostAwareUnit cau = unit_allocation_with_costs(inst, x);
    CostAwareMenu withc = price_with_costs(inst, cau);
    IntervalMenu plain = price_unit_allocation(inst, cau.alloc);
    REQUIRE(withc.bundles.size() == plain.bundles.size());
    for (std::size_t k = 0; k < withc.bundles.size(); ++k) {
      CHECK(withc.bundles[k].copies == plain.bundles[k].copies);
      CHECK(withc.base_prices[k] == doctest::Approx(plain.prices[k]).epsilon(1e-12));
      for (double c : withc.copy_costs[k]) CHECK(c == 0.0);
    }
  }
}

TEST_CASE("selling any interval of a bundle removes all of it") {
  Instance inst = line_inst(2, {{0, 1, 10.0}});
  inst.items[0].costs = {1.0};
  inst.items[1].costs = {3.0};
  CostAwareUnit cau;
  cau.alloc.bundles = {copies_of({{0, 0}, {1, 0}})};
  cau.alloc.assignment = {0};
  cau.alloc.weights = FractionalAllocation(1);
  cau.alloc.weights[0] = 1.0;
  cau.shifted_values = {6.0};
  CostAwareMenu menu = price_with_costs(inst, cau);
  CHECK(menu.base_prices[0] == doctest::Approx(3.0));

  CostMenuState st = make_state(menu);
  CHECK(quote(menu, Bundle(IntervalBundle{0, 0}), st).price == doctest::Approx(4.0));
  CHECK(quote(menu, Bundle(IntervalBundle{1, 1}), st).price == doctest::Approx(6.0));
  CHECK(quote(menu, Bundle(IntervalBundle{0, 1}), st).price == doctest::Approx(7.0));
  st.sold[0] = 1;
  CHECK_FALSE(quote(menu, Bundle(IntervalBundle{0, 0}), st).available);
  CHECK_FALSE(quote(menu, Bundle(IntervalBundle{1, 1}), st).available);
  CHECK_FALSE(quote(menu, Bundle(IntervalBundle{0, 1}), st).available);
}

TEST_CASE("cost quotes take the cheapest containing bundle") {
  Instance inst = line_inst(1, {{0, 0, 6.0}, {0, 0, 4.0}}, {2});
  CostAwareUnit cau;
  cau.alloc.bundles = {copies_of({{0, 0}}), copies_of({{0, 1}})};
  cau.alloc.assignment = {0, 1};
  cau.alloc.weights = FractionalAllocation(2);
  cau.alloc.weights[0] = 1.0;
  cau.alloc.weights[1] = 1.0;
  cau.shifted_values = {6.0, 4.0};
  CostAwareMenu menu = price_with_costs(inst, cau);
  CostMenuState st = make_state(menu);
  QuoteResult q = quote(menu, Bundle(IntervalBundle{0, 0}), st);
  CHECK(q.price == doctest::Approx(2.0));
  CHECK(q.entries == std::vector<int>{1});
  st.sold[1] = 1;
  q = quote(menu, Bundle(IntervalBundle{0, 0}), st);
  CHECK(q.price == doctest::Approx(3.0));
  CHECK(q.entries == std::vector<int>{0});
  st.sold[0] = 1;
  CHECK_FALSE(quote(menu, Bundle(IntervalBundle{0, 0}), st).available);
}

TEST_CASE("the surcharge follows the queried interval exactly") {
  Instance inst = line_inst(3, {{0, 2, 20.0}});
  inst.items[0].costs = {1.0};
  inst.items[1].costs = {2.0};
  inst.items[2].costs = {4.0};
  CostAwareUnit cau;
  cau.alloc.bundles = {copies_of({{0, 0}, {1, 0}, {2, 0}})};
  cau.alloc.assignment = {0};
  cau.alloc.weights = FractionalAllocation(1);
  cau.alloc.weights[0] = 1.0;
  cau.shifted_values = {13.0};
  CostAwareMenu menu = price_with_costs(inst, cau);
  CHECK(menu.base_prices[0] == doctest::Approx(6.5));
  CostMenuState st = make_state(menu);
  CHECK(quote(menu, Bundle(IntervalBundle{1, 2}), st).surcharge == doctest::Approx(6.0));
  CHECK(quote(menu, Bundle(IntervalBundle{0, 0}), st).surcharge == doctest::Approx(1.0));
  CHECK(quote(menu, Bundle(IntervalBundle{0, 2}), st).surcharge == doctest::Approx(7.0));
  CHECK(quote(menu, Bundle(IntervalBundle{0, 2}), st).price == doctest::Approx(13.5));
}

TEST_CASE("cost menu bases obey the half-value identity on random cost instances") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomIntervalParams params;
    params.items = 8;
    params.buyers = 4;
    params.scenarios = 2;
    params.jobs_per_scenario = 2;
    params.max_len = 3;
    params.cap_lo = 1;
    params.cap_hi = 3;
    params.with_costs = true;
    params.seed = seed;
    Instance inst = gen_random_interval(params);
    FractionalAllocation x = scaled_feasible(inst);
    CostAwareUnit cau = unit_allocation_with_costs(inst, x);
    CostAwareMenu menu = price_with_costs(inst, cau);

    std::size_t pos = 0;
    for (std::size_t k = 0; k < cau.alloc.bundles.size(); ++k) {
      std::vector<int> carried;
      for (int j = 0; j < inst.job_count(); ++j)
        if (cau.alloc.assignment[j] == static_cast<int>(k) && cau.alloc.weights[j] > kTol)
          carried.push_back(j);
      if (carried.empty()) continue;
      REQUIRE(pos < menu.bundles.size());
      double w = 0, val = 0;
      for (int j : carried) {
        w += cau.alloc.weights[j];
        val += cau.alloc.weights[j] * cau.shifted_values[j];
      }
      CHECK(menu.base_prices[pos] * 2 * w == doctest::Approx(val).epsilon(1e-12));
      CHECK(menu.base_prices[pos] >= -1e-12);
      // Stored copy costs mirror the instance cost schedules.
      const auto& copies = menu.bundles[pos].copies;
      for (std::size_t i = 0; i < copies.size(); ++i) {
        const auto& costs = inst.items[copies[i].first].costs;
        double want =
            copies[i].second < static_cast<int>(costs.size()) ? costs[copies[i].second] : 0.0;
        CHECK(menu.copy_costs[pos][i] == want);
      }
      ++pos;
    }
    CHECK(pos == menu.bundles.size());
  }
}
