#include "pathmarket/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pathmarket/error.hpp"
#include "pathmarket/rng.hpp"

namespace pm {
namespace {

void require_order(const Instance& inst, const std::vector<int>& order) {
  int n = inst.buyer_count();
  if (static_cast<int>(order.size()) != n)
    fail(ErrorKind::invalid_input, "arrival order size mismatch");
  std::vector<char> seen(n, 0);
  for (int b : order) {
    if (b < 0 || b >= n || seen[b])
      fail(ErrorKind::invalid_input, "arrival order must list every buyer exactly once");
    seen[b] = 1;
  }
}

// Per-buyer outcome list for exact enumeration: (scenario id or -1, prob).
std::vector<std::vector<std::pair<int, double>>> outcome_lists(const Instance& inst) {
  std::vector<std::vector<std::pair<int, double>>> lists(inst.buyer_count());
  for (int b = 0; b < inst.buyer_count(); ++b) {
    double total = 0;
    const auto& scenarios = inst.buyers[b].scenarios;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      lists[b].push_back({static_cast<int>(i), scenarios[i].prob});
      total += scenarios[i].prob;
    }
    if (1 - total > kTol) lists[b].push_back({-1, 1 - total});
  }
  return lists;
}

std::vector<int> shuffled_order(int n, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
  return order;
}

}  // namespace

MenuState make_state(const Menu& menu) {
  return std::visit([](const auto& m) -> MenuState { return make_state(m); }, menu);
}

ArrivalPolicy ArrivalPolicy::fixed_order(std::vector<int> order) {
  ArrivalPolicy p;
  p.kind = Kind::fixed;
  p.order = std::move(order);
  return p;
}

ArrivalPolicy ArrivalPolicy::uniform_random() {
  ArrivalPolicy p;
  p.kind = Kind::uniform_random;
  return p;
}

ArrivalPolicy ArrivalPolicy::adversarial_exhaustive() {
  ArrivalPolicy p;
  p.kind = Kind::adversarial_exhaustive;
  return p;
}

ArrivalPolicy ArrivalPolicy::adversarial_greedy() {
  ArrivalPolicy p;
  p.kind = Kind::adversarial_greedy;
  return p;
}

PurchaseDecision buyer_best_response(const Instance& inst, const Menu& menu, int buyer,
                                     int scenario, const MenuState& state) {
  if (buyer < 0 || buyer >= inst.buyer_count())
    fail(ErrorKind::invalid_input, "buyer id out of range");
  const Buyer& b = inst.buyers[buyer];
  if (scenario < 0 || scenario >= static_cast<int>(b.scenarios.size()))
    fail(ErrorKind::invalid_input, "scenario id out of range");

  PurchaseDecision best;
  double best_util = 0;
  for (int j : b.scenarios[scenario].jobs) {
    const Job& job = inst.jobs[j];
    PurchaseDecision cand;
    if (const auto* im = std::get_if<IntervalMenu>(&menu)) {
      const auto* st = std::get_if<IntervalMenuState>(&state);
      if (!st) fail(ErrorKind::invalid_input, "menu state kind mismatch");
      QuoteResult q = quote(*im, job.bundle, *st);
      if (!q.available) continue;
      cand.payment = q.price;
      cand.entries = std::move(q.entries);
    } else if (const auto* tm = std::get_if<TreeMenu>(&menu)) {
      const auto* st = std::get_if<TreeMenuState>(&state);
      if (!st) fail(ErrorKind::invalid_input, "menu state kind mismatch");
      TreeQuote q = quote(*tm, job.bundle, *st);
      if (!q.available) continue;
      cand.payment = q.price;
      cand.taken = std::move(q.taken);
    } else {
      const auto* cm = std::get_if<CostAwareMenu>(&menu);
      const auto* st = std::get_if<CostMenuState>(&state);
      if (!st) fail(ErrorKind::invalid_input, "menu state kind mismatch");
      QuoteResult q = quote(*cm, job.bundle, *st);
      if (!q.available) continue;
      cand.payment = q.price;
      cand.cost = q.surcharge;
      cand.entries = std::move(q.entries);
    }
    double util = job.value - cand.payment;
    if (util < 0) continue;
    bool better = !best.buy || util > best_util ||
                  (util == best_util &&
                   (cand.payment < best.payment ||
                    (cand.payment == best.payment && j < best.job)));
    if (better) {
      cand.buy = true;
      cand.job = j;
      best = std::move(cand);
      best_util = util;
    }
  }
  return best;
}

void apply_purchase(MenuState& state, const PurchaseDecision& decision) {
  if (!decision.buy) return;
  if (auto* st = std::get_if<IntervalMenuState>(&state)) {
    for (int k : decision.entries) {
      if (st->sold[k]) fail(ErrorKind::numerical, "menu entry sold twice");
      st->sold[k] = 1;
    }
  } else if (auto* st = std::get_if<TreeMenuState>(&state)) {
    for (const auto& [layer, idx] : decision.taken) {
      if (st->sold[layer][idx]) fail(ErrorKind::numerical, "layer copy sold twice");
      st->sold[layer][idx] = 1;
    }
  } else {
    auto& cst = std::get<CostMenuState>(state);
    for (int k : decision.entries) {
      if (cst.sold[k]) fail(ErrorKind::numerical, "cost bundle sold twice");
      cst.sold[k] = 1;
    }
  }
}

TrialOutcome run_mechanism(const Instance& inst, const Menu& menu, const std::vector<int>& order,
                           const Realization& real) {
  require_order(inst, order);
  if (static_cast<int>(real.scenario.size()) != inst.buyer_count())
    fail(ErrorKind::invalid_input, "realization size mismatch");
  MenuState state = make_state(menu);
  TrialOutcome out;
  out.realization = real;
  for (int buyer : order) {
    int s = real.scenario[buyer];
    if (s < 0) continue;
    PurchaseDecision d = buyer_best_response(inst, menu, buyer, s, state);
    if (!d.buy) continue;
    apply_purchase(state, d);
    out.purchases.push_back({buyer, d.job, d.payment, d.cost});
    out.revenue += d.payment - d.cost;
    out.utility += inst.jobs[d.job].value - d.payment;
    out.cost_paid += d.cost;
  }
  out.welfare = out.revenue + out.utility;
  return out;
}

TrialOutcome run_mechanism(const Instance& inst, const Menu& menu, const ArrivalPolicy& policy,
                           const Realization& real, std::uint64_t seed) {
  std::vector<int> order;
  switch (policy.kind) {
    case ArrivalPolicy::Kind::fixed:
      order = policy.order;
      break;
    case ArrivalPolicy::Kind::uniform_random: {
      Rng rng(seed);
      order = shuffled_order(inst.buyer_count(), rng);
      break;
    }
    case ArrivalPolicy::Kind::adversarial_greedy:
      order = greedy_adversary_order(inst);
      break;
    case ArrivalPolicy::Kind::adversarial_exhaustive:
      order = worst_case_order_welfare(inst, menu).order;
      break;
  }
  return run_mechanism(inst, menu, order, real);
}

double expected_welfare_exact(const Instance& inst, const Menu& menu,
                              const std::vector<int>& order, long long cap) {
  require_order(inst, order);
  if (cap < 1) fail(ErrorKind::invalid_input, "enumeration cap must be positive");
  auto lists = outcome_lists(inst);
  long long total = 1;
  for (const auto& l : lists) {
    total *= static_cast<long long>(l.size());
    if (total > cap)
      fail(ErrorKind::budget_exceeded, "scenario space exceeds the enumeration cap");
  }
  int n = inst.buyer_count();
  Realization real;
  real.scenario.assign(n, -1);
  std::vector<std::size_t> idx(n, 0);
  double acc = 0;
  while (true) {
    double p = 1;
    for (int b = 0; b < n; ++b) p *= lists[b][idx[b]].second;
    if (p > 0) {
      for (int b = 0; b < n; ++b) real.scenario[b] = lists[b][idx[b]].first;
      acc += p * run_mechanism(inst, menu, order, real).welfare;
    }
    int b = 0;
    while (b < n && ++idx[b] == lists[b].size()) {
      idx[b] = 0;
      ++b;
    }
    if (b == n) break;
  }
  return acc;
}

std::vector<int> greedy_adversary_order(const Instance& inst) {
  std::vector<double> best(inst.buyer_count(), 0.0);
  for (int b = 0; b < inst.buyer_count(); ++b)
    for (const Scenario& sc : inst.buyers[b].scenarios)
      for (int j : sc.jobs) best[b] = std::max(best[b], inst.jobs[j].value);
  std::vector<int> order(inst.buyer_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return best[a] > best[b]; });
  return order;
}

WorstCaseResult worst_case_order_welfare(const Instance& inst, const Menu& menu,
                                         long long order_cap, long long scenario_cap) {
  int n = inst.buyer_count();
  long long perms = 1;
  bool exhaustive = true;
  for (int i = 2; i <= n && exhaustive; ++i) {
    perms *= i;
    if (perms > order_cap) exhaustive = false;
  }
  WorstCaseResult res;
  if (!exhaustive) {
    res.order = greedy_adversary_order(inst);
    res.value = expected_welfare_exact(inst, menu, res.order, scenario_cap);
    res.exhaustive = false;
    return res;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  res.value = std::numeric_limits<double>::infinity();
  do {
    double w = expected_welfare_exact(inst, menu, order, scenario_cap);
    if (w < res.value) {
      res.value = w;
      res.order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  res.exhaustive = true;
  return res;
}

std::vector<int> resolve_static_order(const Instance& inst, const Menu& menu,
                                      const ArrivalPolicy& policy) {
  std::vector<int> order;
  switch (policy.kind) {
    case ArrivalPolicy::Kind::fixed:
      order = policy.order;
      require_order(inst, order);
      break;
    case ArrivalPolicy::Kind::adversarial_greedy:
      order = greedy_adversary_order(inst);
      break;
    case ArrivalPolicy::Kind::adversarial_exhaustive:
      order = worst_case_order_welfare(inst, menu).order;
      break;
    case ArrivalPolicy::Kind::uniform_random:
      break;
  }
  return order;
}

TrialOutcome monte_carlo_trial(const Instance& inst, const Menu& menu,
                               const ArrivalPolicy& policy,
                               const std::vector<int>& static_order, std::uint64_t seed,
                               long long trial) {
  Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(trial));
  Realization real = draw_realization(inst, rng);
  std::vector<int> order = policy.kind == ArrivalPolicy::Kind::uniform_random
                               ? shuffled_order(inst.buyer_count(), rng)
                               : static_order;
  return run_mechanism(inst, menu, order, real);
}

MonteCarloResult monte_carlo_welfare(const Instance& inst, const Menu& menu,
                                     const ArrivalPolicy& policy, long long trials,
                                     std::uint64_t seed) {
  if (trials < 1) fail(ErrorKind::invalid_input, "trial count must be positive");
  std::vector<int> static_order = resolve_static_order(inst, menu, policy);
  double mean = 0, m2 = 0;
  for (long long t = 0; t < trials; ++t) {
    double w = monte_carlo_trial(inst, menu, policy, static_order, seed, t).welfare;
    double delta = w - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (w - mean);
  }
  MonteCarloResult out;
  out.mean = mean;
  if (trials > 1) out.se = std::sqrt(std::max(0.0, m2) / static_cast<double>(trials - 1) /
                                     static_cast<double>(trials));
  return out;
}

}  // namespace pm
