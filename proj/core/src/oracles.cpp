#include "pathmarket/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pathmarket/error.hpp"
#include "pathmarket/rng.hpp"

namespace pm {

std::vector<int> realized_jobs(const Instance& inst, const Realization& real) {
  std::vector<int> out;
  for (int b = 0; b < inst.buyer_count(); ++b) {
    int s = real.scenario[b];
    if (s < 0) continue;
    for (int j : inst.buyers[b].scenarios[s].jobs) out.push_back(j);
  }
  return out;
}

namespace {

// Search state shared by the double and rational brute-force passes.
template <typename V>
struct Search {
  const Instance* inst;
  std::vector<std::vector<int>> by_buyer;  // realized jobs grouped per buyer
  std::vector<V> suffix_bound;             // max attainable value from buyer i on
  std::vector<int> used;                   // copies consumed per item
  std::vector<int> chosen;
  std::vector<int> best_chosen;
  V best;
  V acc;

  V job_value(const Job& job) const;
  // Marginal production cost of taking the job given current copy usage.
  V marginal_cost(const Job& job) const {
    V c{};
    for (int t : job_items(job)) {
      const auto& item = inst->items[t];
      if (!item.costs.empty()) c += cost_at(item, used[t]);
    }
    return c;
  }
  V cost_at(const Item& item, int copy) const;

  bool fits(const Job& job) const {
    for (int t : job_items(job)) {
      if (used[t] + 1 > inst->items[t].capacity) return false;
    }
    return true;
  }

  void run(size_t bi) {
    if (best < acc) {
      best = acc;
      best_chosen = chosen;
    }
    if (bi == by_buyer.size()) return;
    V bound = acc + suffix_bound[bi];
    if (!(best < bound)) return;  // prune: cannot beat the incumbent
    // Taking a job first tightens the incumbent quickly.
    for (int j : by_buyer[bi]) {
      const Job& job = inst->jobs[j];
      if (!fits(job)) continue;
      V gain = job_value(job) - marginal_cost(job);
      for (int t : job_items(job)) ++used[t];
      acc += gain;
      chosen.push_back(j);
      run(bi + 1);
      chosen.pop_back();
      acc -= gain;
      for (int t : job_items(job)) --used[t];
    }
    run(bi + 1);  // skip this buyer
  }
};

template <>
double Search<double>::job_value(const Job& job) const {
  return job.value;
}
template <>
double Search<double>::cost_at(const Item& item, int copy) const {
  return item.costs[copy];
}
template <>
Rat Search<Rat>::job_value(const Job& job) const {
  return job.value_exact;
}
template <>
Rat Search<Rat>::cost_at(const Item& item, int copy) const {
  return item.costs_exact[copy];
}

template <typename V>
Search<V> make_search(const Instance& inst, const std::vector<int>& jobs) {
  Search<V> s;
  s.inst = &inst;
  std::map<int, std::vector<int>> grouped;
  for (int j : jobs) grouped[inst.jobs[j].buyer].push_back(j);
  for (auto& [b, js] : grouped) s.by_buyer.push_back(js);
  // Buyers with large best values first; deterministic.
  std::stable_sort(s.by_buyer.begin(), s.by_buyer.end(), [&](const auto& a, const auto& b) {
    double va = 0, vb = 0;
    for (int j : a) va = std::max(va, inst.jobs[j].value);
    for (int j : b) vb = std::max(vb, inst.jobs[j].value);
    return va > vb;
  });
  s.suffix_bound.assign(s.by_buyer.size() + 1, V{});
  for (int i = static_cast<int>(s.by_buyer.size()) - 1; i >= 0; --i) {
    V mx{};
    for (int j : s.by_buyer[i]) {
      V v = s.job_value(inst.jobs[j]);
      if (mx < v) mx = v;
    }
    s.suffix_bound[i] = s.suffix_bound[i + 1] + mx;
  }
  s.used.assign(inst.item_count(), 0);
  s.best = V{};
  s.acc = V{};
  return s;
}

template <typename V>
std::pair<V, std::vector<int>> brute_force(const Instance& inst, const std::vector<int>& jobs,
                                           const OracleBudget& budget) {
  if (static_cast<int>(jobs.size()) > budget.max_search_jobs) {
    fail(ErrorKind::budget_exceeded,
         "hindsight search over " + std::to_string(jobs.size()) + " jobs exceeds budget " +
             std::to_string(budget.max_search_jobs));
  }
  Search<V> s = make_search<V>(inst, jobs);
  s.run(0);
  std::sort(s.best_chosen.begin(), s.best_chosen.end());
  return {s.best, s.best_chosen};
}

}  // namespace

bool hindsight_dp_applicable(const Instance& inst, const std::vector<int>& jobs) {
  if (!inst.is_line()) return false;
  for (const auto& item : inst.items) {
    if (item.capacity != 1 || !item.costs.empty()) return false;
  }
  std::vector<int> seen;
  for (int j : jobs) {
    int b = inst.jobs[j].buyer;
    if (std::find(seen.begin(), seen.end(), b) != seen.end()) return false;
    seen.push_back(b);
  }
  return true;
}

HindsightResult hindsight_interval_dp(const Instance& inst, const std::vector<int>& jobs) {
  // Weighted interval scheduling over the realized jobs, ends ascending.
  std::vector<int> order(jobs);
  auto last_of = [&](int j) { return std::get<IntervalBundle>(inst.jobs[j].bundle).last; };
  auto first_of = [&](int j) { return std::get<IntervalBundle>(inst.jobs[j].bundle).first; };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (last_of(a) != last_of(b)) return last_of(a) < last_of(b);
    return a < b;
  });
  int n = static_cast<int>(order.size());
  std::vector<double> dp(n + 1, 0.0);
  std::vector<char> took(n, 0);
  std::vector<int> prev_idx(n, -1);
  for (int i = 0; i < n; ++i) {
    int prev = -1;
    for (int k = i - 1; k >= 0; --k) {
      if (last_of(order[k]) < first_of(order[i])) {
        prev = k;
        break;
      }
    }
    double with = inst.jobs[order[i]].value + dp[prev + 1];
    if (with > dp[i]) {
      dp[i + 1] = with;
      took[i] = 1;
      prev_idx[i] = prev;
    } else {
      dp[i + 1] = dp[i];
    }
  }
  HindsightResult res;
  res.value = dp[n];
  for (int i = n - 1; i >= 0;) {
    if (took[i]) {
      res.chosen.push_back(order[i]);
      i = prev_idx[i];
    } else {
      --i;
    }
  }
  std::sort(res.chosen.begin(), res.chosen.end());
  return res;
}

HindsightResult hindsight_opt(const Instance& inst, const Realization& real,
                              const OracleBudget& budget) {
  std::vector<int> jobs = realized_jobs(inst, real);
  if (hindsight_dp_applicable(inst, jobs)) return hindsight_interval_dp(inst, jobs);
  auto [value, chosen] = brute_force<double>(inst, jobs, budget);
  HindsightResult res;
  res.value = value;
  res.chosen = std::move(chosen);
  return res;
}

namespace {

template <typename V, typename ProbOf, typename Hind>
V expectation(const Instance& inst, const OracleBudget& budget, ProbOf prob_of, Hind hind, V one,
              V eps) {
  // Per-buyer outcome lists: every scenario plus the no-show branch when
  // scenario probabilities leave residual mass.
  std::vector<std::vector<int>> outcomes(inst.buyer_count());
  std::vector<V> residual(inst.buyer_count());
  std::int64_t count = 1;
  for (int b = 0; b < inst.buyer_count(); ++b) {
    for (size_t s = 0; s < inst.buyers[b].scenarios.size(); ++s) outcomes[b].push_back(static_cast<int>(s));
    V none = one;
    for (size_t s = 0; s < inst.buyers[b].scenarios.size(); ++s) none -= prob_of(b, static_cast<int>(s));
    residual[b] = none;
    if (eps < none) outcomes[b].push_back(-1);
    count *= static_cast<std::int64_t>(outcomes[b].size());
    if (count > budget.max_realizations) {
      fail(ErrorKind::budget_exceeded, "realization space exceeds budget");
    }
  }

  Realization real;
  real.scenario.assign(inst.buyer_count(), -1);
  V total{};
  std::vector<size_t> idx(inst.buyer_count(), 0);
  while (true) {
    V p = one;
    for (int b = 0; b < inst.buyer_count(); ++b) {
      int s = outcomes[b][idx[b]];
      real.scenario[b] = s;
      p *= s >= 0 ? prob_of(b, s) : residual[b];
    }
    total += p * hind(real);
    int b = inst.buyer_count() - 1;
    for (; b >= 0; --b) {
      if (++idx[b] < outcomes[b].size()) break;
      idx[b] = 0;
    }
    if (b < 0) break;
  }
  return total;
}

}  // namespace

double offline_opt_exact(const Instance& inst, const OracleBudget& budget) {
  return expectation<double>(
      inst, budget, [&](int b, int s) { return inst.buyers[b].scenarios[s].prob; },
      [&](const Realization& r) { return hindsight_opt(inst, r, budget).value; }, 1.0, kTol);
}

Rat offline_opt_exact_rational(const Instance& inst, const OracleBudget& budget) {
  return expectation<Rat>(
      inst, budget, [&](int b, int s) { return inst.buyers[b].scenarios[s].prob_exact; },
      [&](const Realization& r) {
        return brute_force<Rat>(inst, realized_jobs(inst, r), budget).first;
      },
      Rat(1), Rat(0));
}

HindsightResult hindsight_brute_force(const Instance& inst, const std::vector<int>& jobs,
                                      const OracleBudget& budget) {
  auto [value, chosen] = brute_force<double>(inst, jobs, budget);
  HindsightResult res;
  res.value = value;
  res.chosen = std::move(chosen);
  return res;
}

HindsightResult hindsight_greedy_by_value(const Instance& inst, const Realization& real) {
  std::vector<int> jobs = realized_jobs(inst, real);
  std::sort(jobs.begin(), jobs.end(), [&](int a, int b) {
    if (inst.jobs[a].value != inst.jobs[b].value) return inst.jobs[a].value > inst.jobs[b].value;
    return a < b;
  });
  std::vector<int> used(inst.item_count(), 0);
  std::vector<char> served(inst.buyer_count(), 0);
  HindsightResult res;
  for (int j : jobs) {
    const Job& job = inst.jobs[j];
    if (served[job.buyer]) continue;
    bool fits = true;
    for (int t : job_items(job)) {
      if (used[t] + 1 > inst.items[t].capacity) fits = false;
    }
    if (!fits) continue;
    double gain = job.value;
    for (int t : job_items(job)) {
      const auto& item = inst.items[t];
      if (!item.costs.empty()) gain -= item.costs[used[t]];
      ++used[t];
    }
    served[job.buyer] = 1;
    res.value += gain;
    res.chosen.push_back(j);
  }
  std::sort(res.chosen.begin(), res.chosen.end());
  return res;
}

namespace {

template <class TrialValue>
EstimateResult estimate_core(const Instance& inst, long long trials, std::uint64_t seed,
                             TrialValue&& value_of) {
  if (trials < 1) fail(ErrorKind::invalid_input, "trial count must be positive");
  double mean = 0, m2 = 0;
  for (long long t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    Realization real = draw_realization(inst, rng);
    double v = value_of(real);
    double delta = v - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (v - mean);
  }
  EstimateResult out;
  out.mean = mean;
  if (trials > 1) out.se = std::sqrt(std::max(0.0, m2) / static_cast<double>(trials - 1) /
                                     static_cast<double>(trials));
  return out;
}

}  // namespace

EstimateResult offline_opt_estimate(const Instance& inst, long long trials, std::uint64_t seed,
                                    const OracleBudget& budget) {
  return estimate_core(inst, trials, seed,
                       [&](const Realization& r) { return hindsight_opt(inst, r, budget).value; });
}

EstimateResult greedy_offline_estimate(const Instance& inst, long long trials,
                                       std::uint64_t seed) {
  return estimate_core(inst, trials, seed, [&](const Realization& r) {
    return hindsight_greedy_by_value(inst, r).value;
  });
}

}  // namespace pm
