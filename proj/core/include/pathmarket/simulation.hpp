#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "pathmarket/model.hpp"
#include "pathmarket/pricing.hpp"

namespace pm {

// Any posted menu the mechanism can run against, with its matching state.
using Menu = std::variant<IntervalMenu, TreeMenu, CostAwareMenu>;
using MenuState = std::variant<IntervalMenuState, TreeMenuState, CostMenuState>;

MenuState make_state(const Menu& menu);

// Arrival order rule. A fixed order must list every buyer exactly once;
// the adversarial modes pick the order before any realization is drawn.
struct ArrivalPolicy {
  enum class Kind { fixed, uniform_random, adversarial_exhaustive, adversarial_greedy };
  Kind kind = Kind::fixed;
  std::vector<int> order;  // fixed mode only

  static ArrivalPolicy fixed_order(std::vector<int> order);
  static ArrivalPolicy uniform_random();
  static ArrivalPolicy adversarial_exhaustive();
  static ArrivalPolicy adversarial_greedy();
};

// What one buyer walks away with: the chosen job, the gross payment, and the
// production cost the payment covers (cost menus only).
struct PurchaseDecision {
  bool buy = false;
  int job = -1;
  double payment = 0;
  double cost = 0;
  std::vector<int> entries;                  // interval and cost menus
  std::vector<std::pair<int, int>> taken;    // tree menus (layer, copy position)
};

// Utility-maximizing purchase for the realized scenario: the cheapest cover
// per job, the best job by utility, ties toward lower price then lower job
// id, and no purchase only when every job has negative utility.
PurchaseDecision buyer_best_response(const Instance& inst, const Menu& menu, int buyer,
                                     int scenario, const MenuState& state);

void apply_purchase(MenuState& state, const PurchaseDecision& decision);

struct Purchase {
  int buyer = 0;
  int job = 0;
  double payment = 0;
  double cost = 0;
};

// Revenue is net of production costs, so welfare = revenue + utility holds
// in every mode and equals realized value minus costs.
struct TrialOutcome {
  Realization realization;
  std::vector<Purchase> purchases;
  double revenue = 0;
  double utility = 0;
  double welfare = 0;
  double cost_paid = 0;
};

// Plays the buyers in the given order against a fresh menu state.
TrialOutcome run_mechanism(const Instance& inst, const Menu& menu, const std::vector<int>& order,
                           const Realization& real);

// Resolves the policy to an order (shuffling with the seed when random) and
// runs the trial.
TrialOutcome run_mechanism(const Instance& inst, const Menu& menu, const ArrivalPolicy& policy,
                           const Realization& real, std::uint64_t seed);

inline constexpr long long kScenarioSpaceCap = 1 << 20;

// Exact expectation over the product scenario space for a fixed order.
double expected_welfare_exact(const Instance& inst, const Menu& menu,
                              const std::vector<int>& order,
                              long long cap = kScenarioSpaceCap);

inline constexpr long long kOrderCap = 40320;  // 8!

// Buyers sorted by descending best-case value; the adversarial heuristic.
std::vector<int> greedy_adversary_order(const Instance& inst);

// exhaustive: true when every permutation was enumerated, so value is the
// exact adversarial welfare; false means the greedy heuristic order, whose
// value only upper-bounds the adversary's power.
struct WorstCaseResult {
  std::vector<int> order;
  double value = 0;
  bool exhaustive = false;
};

WorstCaseResult worst_case_order_welfare(const Instance& inst, const Menu& menu,
                                         long long order_cap = kOrderCap,
                                         long long scenario_cap = kScenarioSpaceCap);

struct MonteCarloResult {
  double mean = 0;
  double se = 0;
};

// Order shared by every trial of a non-random policy; empty for uniform
// random arrivals, which shuffle per trial.
std::vector<int> resolve_static_order(const Instance& inst, const Menu& menu,
                                      const ArrivalPolicy& policy);

// One trial: the generator is derived from (seed, trial), and the
// realization is drawn before any shuffle so every policy sees the same
// sample path.
TrialOutcome monte_carlo_trial(const Instance& inst, const Menu& menu,
                               const ArrivalPolicy& policy,
                               const std::vector<int>& static_order, std::uint64_t seed,
                               long long trial);

// Independent trials with per-trial generators derived from (seed, trial).
MonteCarloResult monte_carlo_welfare(const Instance& inst, const Menu& menu,
                                     const ArrivalPolicy& policy, long long trials,
                                     std::uint64_t seed);

}  // namespace pm
