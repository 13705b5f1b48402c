#pragma once

#include "pathmarket/model.hpp"

namespace pm {

struct LpSolution {
  enum class Status { optimal, infeasible, numerical_failure };

  FractionalAllocation allocation;
  double objective = 0;
  Status status = Status::numerical_failure;
};

// Maximizes frac_value over the supply/demand polytope: per-item load at most
// capacity, per-scenario weight at most the scenario probability. Deterministic
// pivoting makes the returned optimum a stable function of the instance.
LpSolution solve_frac_opt(const Instance& inst);

// Cost-aware variant: maximizes frac_value minus production cost, demand
// constraints only. Encoded with one variable per item copy; cost monotonicity
// makes copies fill in order at the optimum, so the objective equals
// frac_value_with_costs of the returned allocation.
LpSolution solve_frac_opt_with_costs(const Instance& inst);

}  // namespace pm
