#include "doctest.h"

#include "pathmarket/generators.hpp"
#include "pathmarket/oracles.hpp"
#include "pathmarket/relaxation.hpp"
#include "test_support.hpp"

using namespace pm;

namespace {

void check_feasible(const Instance& inst, const LpSolution& sol) {
  for (int j = 0; j < inst.job_count(); ++j) CHECK(sol.allocation[j] >= -1e-9);
  for (int t = 0; t < inst.item_count(); ++t) {
    CHECK(item_frac_weight(inst, sol.allocation, t) <= inst.items[t].capacity + 1e-7);
  }
  for (const auto& buyer : inst.buyers) {
    for (const auto& sc : buyer.scenarios) {
      double mass = 0;
      for (int j : sc.jobs) mass += sol.allocation[j];
      CHECK(mass <= sc.prob + 1e-7);
    }
  }
}

}  // namespace

TEST_CASE("single certain buyer takes the whole item") {
  auto inst = pm_test::from_json(R"({
    "topology": {"line": 1},
    "items": [{"capacity": 1}],
    "buyers": [{"scenarios": [{"prob": 1, "jobs": [{"bundle": [0, 0], "value": 5}]}]}]
  })");
  auto sol = solve_frac_opt(inst);
  REQUIRE(sol.status == LpSolution::Status::optimal);
  CHECK(sol.objective == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(sol.allocation[0] == doctest::Approx(1.0).epsilon(1e-9));
  check_feasible(inst, sol);
}

TEST_CASE("single-item two-buyer instance splits by scenario mass") {
  auto inst = gen_footnote_single_item(Rat(1, 10));
  auto sol = solve_frac_opt(inst);
  REQUIRE(sol.status == LpSolution::Status::optimal);
  CHECK(sol.objective == doctest::Approx(1.9).epsilon(1e-9));
  CHECK(sol.allocation[1] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(sol.allocation[0] == doctest::Approx(0.9).epsilon(1e-9));
  check_feasible(inst, sol);
}

TEST_CASE("objective equals fractional value of the returned allocation") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomIntervalParams params;
    params.items = 6;
    params.buyers = 4;
    params.seed = seed;
    auto inst = gen_random_interval(params);
    auto sol = solve_frac_opt(inst);
    REQUIRE(sol.status == LpSolution::Status::optimal);
    CHECK(sol.objective == doctest::Approx(frac_value(inst, sol.allocation)).epsilon(1e-7));
    check_feasible(inst, sol);
  }
}

TEST_CASE("relaxation upper-bounds the exact offline optimum") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomIntervalParams params;
    params.items = 6;
    params.buyers = 5;
    params.max_len = 3;
    params.seed = seed;
    auto inst = gen_random_interval(params);
    auto sol = solve_frac_opt(inst);
    REQUIRE(sol.status == LpSolution::Status::optimal);
    double opt = offline_opt_exact(inst);
    CHECK(sol.objective >= opt - 1e-7);
  }
}

TEST_CASE("adding a buyer never decreases the objective") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomIntervalParams params;
    params.items = 5;
    params.buyers = 4;
    params.seed = seed;
    auto inst = gen_random_interval(params);
    double before = solve_frac_opt(inst).objective;
    pm_test::append_deterministic_buyer(inst, IntervalBundle{0, 0}, 2.0);
    REQUIRE(validate_instance(inst).ok());
    double after = solve_frac_opt(inst).objective;
    CHECK(after >= before - 1e-9);
  }
}

TEST_CASE("deterministic resolve returns identical allocations") {
  RandomIntervalParams params;
  params.items = 8;
  params.buyers = 6;
  params.seed = 7;
  auto inst = gen_random_interval(params);
  auto a = solve_frac_opt(inst);
  auto b = solve_frac_opt(inst);
  REQUIRE(a.allocation.size() == b.allocation.size());
  for (int j = 0; j < inst.job_count(); ++j) CHECK(a.allocation[j] == b.allocation[j]);
  CHECK(a.objective == b.objective);
}

TEST_CASE("zero cost schedules reduce to the fixed-capacity relaxation") {
  auto with_costs = pm_test::from_json(R"({
    "topology": {"line": 2},
    "items": [{"capacity": 2, "costs": [0, 0]}, {"capacity": 1, "costs": [0]}],
    "buyers": [
      {"scenarios": [{"prob": 1, "jobs": [{"bundle": [0, 1], "value": 4}]}]},
      {"scenarios": [{"prob": 0.5, "jobs": [{"bundle": [0, 0], "value": 3}]}]},
      {"scenarios": [{"prob": 1, "jobs": [{"bundle": [0, 0], "value": 2}]}]}
    ]
  })");
  auto plain = pm_test::from_json(R"({
    "topology": {"line": 2},
    "items": [{"capacity": 2}, {"capacity": 1}],
    "buyers": [
      {"scenarios": [{"prob": 1, "jobs": [{"bundle": [0, 1], "value": 4}]}]},
      {"scenarios": [{"prob": 0.5, "jobs": [{"bundle": [0, 0], "value": 3}]}]},
      {"scenarios": [{"prob": 1, "jobs": [{"bundle": [0, 0], "value": 2}]}]}
    ]
  })");
  auto a = solve_frac_opt_with_costs(with_costs);
  auto b = solve_frac_opt(plain);
  REQUIRE(a.status == LpSolution::Status::optimal);
  REQUIRE(b.status == LpSolution::Status::optimal);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("an unprofitable second copy stays unsold") {
  auto inst = pm_test::from_json(R"({
    "topology": {"line": 1},
    "items": [{"capacity": 2, "costs": [0, 100]}],
    "buyers": [
      {"scenarios": [{"prob": 1, "jobs": [{"bundle": [0, 0], "value": 5}]}]},
      {"scenarios": [{"prob": 1, "jobs": [{"bundle": [0, 0], "value": 5}]}]}
    ]
  })");
  auto sol = solve_frac_opt_with_costs(inst);
  REQUIRE(sol.status == LpSolution::Status::optimal);
  CHECK(sol.objective == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(sol.allocation[0] + sol.allocation[1] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("cost-aware relaxation upper-bounds the exact offline optimum") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    RandomIntervalParams params;
    params.items = 4;
    params.buyers = 4;
    params.max_len = 2;
    params.cap_lo = 1;
    params.cap_hi = 3;
    params.with_costs = true;
    params.seed = seed;
    auto inst = gen_random_interval(params);
    auto sol = solve_frac_opt_with_costs(inst);
    REQUIRE(sol.status == LpSolution::Status::optimal);
    double opt = offline_opt_exact(inst);
    CHECK(sol.objective >= opt - 1e-7);
  }
}

TEST_CASE("costs only lower the achievable objective") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomIntervalParams params;
    params.items = 4;
    params.buyers = 4;
    params.cap_lo = 1;
    params.cap_hi = 3;
    params.with_costs = true;
    params.seed = seed;
    auto inst = gen_random_interval(params);
    auto with_costs = solve_frac_opt_with_costs(inst);
    Instance free = inst;
    for (auto& item : free.items) {
      item.costs.clear();
      item.costs_exact.clear();
    }
    auto without = solve_frac_opt(free);
    CHECK(with_costs.objective <= without.objective + 1e-9);
  }
}
