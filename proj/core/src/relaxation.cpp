#include "pathmarket/relaxation.hpp"

#include <cmath>

#include "pathmarket/error.hpp"
#include "pathmarket/simplex.hpp"

namespace pm {

namespace {

// Demand rows: one per (buyer, scenario) bounding its jobs' total weight.
void add_demand_rows(const Instance& inst, int columns, SimplexProblem* prob) {
  for (const auto& buyer : inst.buyers) {
    for (const auto& sc : buyer.scenarios) {
      std::vector<double> row(columns, 0.0);
      for (int j : sc.jobs) row[j] = 1.0;
      prob->rows.push_back(std::move(row));
      prob->rhs.push_back(sc.prob);
    }
  }
}

}  // namespace

LpSolution solve_frac_opt(const Instance& inst) {
  const int n = inst.job_count();
  SimplexProblem prob;
  prob.obj.resize(n);
  for (const auto& job : inst.jobs) prob.obj[job.id] = job.value;
  for (int t = 0; t < inst.item_count(); ++t) {
    std::vector<double> row(n, 0.0);
    for (const auto& job : inst.jobs) {
      if (job_uses_item(job, t)) row[job.id] = 1.0;
    }
    prob.rows.push_back(std::move(row));
    prob.rhs.push_back(inst.items[t].capacity);
  }
  add_demand_rows(inst, n, &prob);

  LpSolution sol;
  sol.allocation = FractionalAllocation(n);
  try {
    SimplexResult res = simplex_max(prob);
    for (int j = 0; j < n; ++j) sol.allocation[j] = res.x[j];
    sol.objective = res.objective;
    sol.status = LpSolution::Status::optimal;
  } catch (const Error&) {
    sol.status = LpSolution::Status::numerical_failure;
  }
  return sol;
}

LpSolution solve_frac_opt_with_costs(const Instance& inst) {
  const int n = inst.job_count();
  // Columns: job weights, then one column per item copy.
  int columns = n;
  std::vector<int> copy_base(inst.item_count());
  for (int t = 0; t < inst.item_count(); ++t) {
    copy_base[t] = columns;
    columns += inst.items[t].capacity;
  }

  SimplexProblem prob;
  prob.obj.assign(columns, 0.0);
  for (const auto& job : inst.jobs) prob.obj[job.id] = job.value;
  for (int t = 0; t < inst.item_count(); ++t) {
    const auto& item = inst.items[t];
    for (int r = 0; r < item.capacity; ++r) {
      double c = item.costs.empty() ? 0.0 : item.costs[r];
      prob.obj[copy_base[t] + r] = -c;
    }
  }
  add_demand_rows(inst, columns, &prob);
  for (int t = 0; t < inst.item_count(); ++t) {
    // Load at t must be bought as copies: sum_j x_j - sum_r y_tr <= 0.
    std::vector<double> row(columns, 0.0);
    for (const auto& job : inst.jobs) {
      if (job_uses_item(job, t)) row[job.id] = 1.0;
    }
    for (int r = 0; r < inst.items[t].capacity; ++r) row[copy_base[t] + r] = -1.0;
    prob.rows.push_back(std::move(row));
    prob.rhs.push_back(0.0);
    for (int r = 0; r < inst.items[t].capacity; ++r) {
      std::vector<double> cap(columns, 0.0);
      cap[copy_base[t] + r] = 1.0;
      prob.rows.push_back(std::move(cap));
      prob.rhs.push_back(1.0);
    }
  }

  LpSolution sol;
  sol.allocation = FractionalAllocation(n);
  try {
    SimplexResult res = simplex_max(prob);
    for (int j = 0; j < n; ++j) sol.allocation[j] = res.x[j];
    sol.objective = res.objective;
    sol.status = LpSolution::Status::optimal;
  } catch (const Error&) {
    sol.status = LpSolution::Status::numerical_failure;
  }
  return sol;
}

}  // namespace pm
