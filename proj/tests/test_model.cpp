#include "pathmarket/model.hpp"

#include "doctest.h"

using namespace pm;

namespace {

// Line instance with jobs [0,1] v=10 and [0,1] v=1 under one buyer each.
Instance two_job_line() {
  Instance inst;
  inst.topology = LineTopology{2};
  inst.items = {Item{}, Item{}};
  for (int b = 0; b < 2; ++b) {
    Job job;
    job.id = b;
    job.buyer = b;
    job.scenario = 0;
    job.bundle = IntervalBundle{0, 1};
    job.value = b == 0 ? 10 : 1;
    job.value_exact = Rat(b == 0 ? 10 : 1);
    inst.jobs.push_back(job);
    Scenario sc;
    sc.prob = 1;
    sc.prob_exact = Rat(1);
    sc.jobs = {b};
    inst.buyers.push_back(Buyer{{sc}});
  }
  return inst;
}

}  // namespace

TEST_CASE("frac accounting") {
  Instance inst = two_job_line();
  FractionalAllocation x(2);

  SUBCASE("empty allocation sums to zero") {
    CHECK(frac_weight(x) == 0.0);
    CHECK(frac_value(inst, x) == 0.0);
  }

  SUBCASE("direct sums") {
    x[0] = 0.3;
    x[1] = 0.5;
    CHECK(frac_weight(x) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(frac_value(inst, x) == doctest::Approx(10 * 0.3 + 0.5).epsilon(1e-12));
    CHECK(frac_weight(x, {0}) == doctest::Approx(0.3));
  }

  SUBCASE("per-item value share") {
    x[0] = 0.5;
    x[1] = 0.5;
    // densities 5 and 0.5, each weighted by 0.5
    CHECK(item_frac_value(inst, x, 0) == doctest::Approx(2.75).epsilon(1e-12));
    CHECK(item_frac_value(inst, x, 1) == doctest::Approx(2.75).epsilon(1e-12));
    double total = item_frac_value(inst, x, 0) + item_frac_value(inst, x, 1);
    CHECK(total == doctest::Approx(frac_value(inst, x)).epsilon(1e-9));
    CHECK(item_frac_weight(inst, x, 0) == doctest::Approx(1.0));
  }

  SUBCASE("single job density") {
    Job j;
    j.bundle = IntervalBundle{1, 2};
    j.value = 10;
    CHECK(job_length(j) == 2);
    CHECK(job_density(j) == doctest::Approx(5.0));
  }
}

TEST_CASE("derived scales") {
  Instance inst = two_job_line();
  CHECK(length_scale(inst) == 2);
  CHECK(value_spread(inst) == doctest::Approx(10.0));
  CHECK(min_capacity(inst) == 1);
}

TEST_CASE("validate accepts a well-formed instance") {
  Instance inst = two_job_line();
  auto rep = validate_instance(inst);
  CHECK(rep.ok());
}

TEST_CASE("validate flags scenario mass above one") {
  Instance inst = two_job_line();
  inst.buyers[0].scenarios[0].prob = 1.2;
  auto rep = validate_instance(inst);
  REQUIRE_FALSE(rep.ok());
  bool named = false;
  for (const auto& p : rep.problems) {
    if (p.find("buyer 0") != std::string::npos) named = true;
  }
  CHECK(named);
}

TEST_CASE("validate flags dominated duplicate job") {
  Instance inst = two_job_line();
  // Give buyer 0 a second job: [0,0] with the same value as its [0,1] job.
  Job extra;
  extra.id = 2;
  extra.buyer = 0;
  extra.scenario = 0;
  extra.bundle = IntervalBundle{0, 0};
  extra.value = 10;
  extra.value_exact = Rat(10);
  inst.jobs.push_back(extra);
  inst.buyers[0].scenarios[0].jobs.push_back(2);
  auto rep = validate_instance(inst);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.problems[0].find("dominated") != std::string::npos);
}

TEST_CASE("validate flags disconnected tree path") {
  Instance inst;
  // Star: vertices 1,2,3 all hang off the root.
  inst.topology = TreeTopology{{0, 0, 0}};
  inst.items = {Item{}, Item{}, Item{}};
  Job job;
  job.id = 0;
  job.buyer = 0;
  job.scenario = 0;
  job.bundle = PathBundle{{0, 2}};
  job.value = 1;
  job.value_exact = Rat(1);
  inst.jobs.push_back(job);
  Scenario sc;
  sc.prob = 1;
  sc.prob_exact = Rat(1);
  sc.jobs = {0};
  inst.buyers.push_back(Buyer{{sc}});

  SUBCASE("two edges through the root form a path") {
    CHECK(validate_instance(inst).ok());
  }

  SUBCASE("missing middle edge breaks the path") {
    // Chain 0-1-2-3: parents (0,1,2); edges {0,2} skip edge 1.
    inst.topology = TreeTopology{{0, 1, 2}};
    auto rep = validate_instance(inst);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.problems[0].find("job 0") != std::string::npos);
  }

  SUBCASE("degree three is rejected") {
    inst.jobs[0].bundle = PathBundle{{0, 1, 2}};
    auto rep = validate_instance(inst);
    REQUIRE_FALSE(rep.ok());
  }
}

TEST_CASE("tree view depths and subtrees") {
  // 0 - 1 - 2 with a side branch 1 - 4 (vertices); edges: 0:(1,0) 1:(2,1) 2:(3,2) 3:(4,1)
  TreeTopology topo{{0, 1, 2, 1}};
  TreeView tv = build_tree_view(topo, 0);
  CHECK(tv.edge_depth[0] == 1);
  CHECK(tv.edge_depth[1] == 2);
  CHECK(tv.edge_depth[2] == 3);
  CHECK(tv.edge_depth[3] == 2);
  CHECK(tv.parent_edge[1] == 0);
  CHECK(tv.parent_edge[0] == -1);
  CHECK(tv.root_edges == std::vector<int>{0});
  CHECK(tv.child_edges[0] == std::vector<int>{1, 3});
  CHECK(tv.edge_in_subtree(2, 0));
  CHECK(tv.edge_in_subtree(2, 1));
  CHECK_FALSE(tv.edge_in_subtree(2, 3));
  CHECK(tv.edge_in_subtree(2, 2));

  SUBCASE("re-rooting flips depths without renaming edges") {
    TreeView rv = build_tree_view(topo, 3);  // root at vertex 3 (deep end)
    CHECK(rv.edge_depth[2] == 1);
    CHECK(rv.edge_depth[1] == 2);
    CHECK(rv.edge_depth[0] == 3);
    CHECK(rv.edge_depth[3] == 3);
    CHECK(rv.deep_vertex[0] == 0);
  }
}
