#include "pathmarket/generators.hpp"

#include <algorithm>

#include "pathmarket/error.hpp"
#include "pathmarket/rng.hpp"

namespace pm {

namespace {

void push_job(Instance* inst, int buyer, int scenario, Bundle bundle, const Rat& value) {
  Job job;
  job.id = inst->job_count();
  job.buyer = buyer;
  job.scenario = scenario;
  job.bundle = std::move(bundle);
  job.value = value.to_double();
  job.value_exact = value;
  inst->buyers[buyer].scenarios[scenario].jobs.push_back(job.id);
  inst->jobs.push_back(std::move(job));
}

int add_buyer(Instance* inst) {
  inst->buyers.push_back(Buyer{});
  return inst->buyer_count() - 1;
}

void add_scenario(Instance* inst, int buyer, const Rat& prob) {
  Scenario sc;
  sc.prob = prob.to_double();
  sc.prob_exact = prob;
  inst->buyers[buyer].scenarios.push_back(std::move(sc));
}

// Values are drawn on a 1/16 grid so the exact fields stay small rationals.
Rat draw_value(Rng* rng, double lo, double hi) {
  int klo = static_cast<int>(lo * 16 + 0.5);
  int khi = static_cast<int>(hi * 16 + 0.5);
  if (klo < 1) klo = 1;
  if (khi < klo) khi = klo;
  return Rat(rng->uniform_int(klo, khi), 16);
}

// True when job a makes b redundant: same scenario, containing bundle, no
// smaller value on the smaller bundle.
bool dominates(const Job& outer, const Job& inner) {
  if (const auto* oi = std::get_if<IntervalBundle>(&outer.bundle)) {
    const auto& ii = std::get<IntervalBundle>(inner.bundle);
    if (!(oi->first <= ii.first && ii.last <= oi->last)) return false;
  } else {
    const auto& oe = std::get<PathBundle>(outer.bundle).edges;
    const auto& ie = std::get<PathBundle>(inner.bundle).edges;
    for (int e : ie) {
      if (std::find(oe.begin(), oe.end(), e) == oe.end()) return false;
    }
  }
  return job_length(outer) > job_length(inner) && outer.value <= inner.value;
}

}  // namespace

Instance gen_footnote_single_item(const Rat& eps) {
  if (!(Rat(0) < eps && eps < Rat(1))) fail(ErrorKind::invalid_input, "eps must lie in (0,1)");
  Instance inst;
  inst.topology = LineTopology{1};
  inst.items = {Item{}};
  int b1 = add_buyer(&inst);
  add_scenario(&inst, b1, Rat(1));
  push_job(&inst, b1, 0, IntervalBundle{0, 0}, Rat(1));
  int b2 = add_buyer(&inst);
  add_scenario(&inst, b2, eps);
  push_job(&inst, b2, 0, IntervalBundle{0, 0}, Rat(1) / eps);
  return inst;
}

Instance gen_footnote_item_pricing(int n_items, const Rat& eps) {
  if (n_items < 2) fail(ErrorKind::invalid_input, "need at least 2 items");
  if (!(Rat(0) < eps && eps < Rat(1))) fail(ErrorKind::invalid_input, "eps must lie in (0,1)");
  Instance inst;
  inst.topology = LineTopology{n_items};
  inst.items.assign(n_items, Item{});
  int b1 = add_buyer(&inst);
  add_scenario(&inst, b1, Rat(1));
  for (int t = 0; t < n_items; ++t) push_job(&inst, b1, 0, IntervalBundle{t, t}, Rat(1));
  int b2 = add_buyer(&inst);
  add_scenario(&inst, b2, Rat(1));
  push_job(&inst, b2, 0, IntervalBundle{0, n_items - 1}, Rat(n_items) - eps);
  return inst;
}

Instance gen_tree_lower_bound(int height) {
  if (height < 2 || height > 10) fail(ErrorKind::invalid_input, "height must lie in [2,10]");
  int edges = (2 << height) - 2;  // 2^(height+1) - 2
  Instance inst;
  TreeTopology topo;
  topo.parents.resize(edges);
  for (int e = 0; e < edges; ++e) topo.parents[e] = e / 2;  // heap shape
  inst.topology = std::move(topo);
  inst.items.assign(edges, Item{});

  // Vertex v sits at tree depth floor(log2(v+1)); its up-edge level counts
  // from the leaves.
  auto edge_level = [&](int e) {
    int v = e + 1;
    int depth = 0;
    while ((2 << depth) <= v + 1) ++depth;  // depth = floor(log2(v+1))
    return height - depth;
  };
  int first_leaf_edge = (1 << height) - 2;

  for (int level = 0; level < height; ++level) {
    Rat value(std::int64_t{1} << level);
    Rat prob(1, std::int64_t{1} << level);
    for (int e = 0; e < edges; ++e) {
      if (edge_level(e) != level) continue;
      // Leaf edges under e: climb each candidate's ancestry.
      for (int f = first_leaf_edge; f < edges; ++f) {
        std::vector<int> path;
        int g = f;
        bool under = false;
        while (g >= 0) {
          path.push_back(g);
          if (g == e) {
            under = true;
            break;
          }
          int pv = g / 2;  // parent vertex of the deep endpoint
          g = pv - 1;      // its up edge, -1 at the root
        }
        if (!under) continue;
        std::reverse(path.begin(), path.end());
        int b = add_buyer(&inst);
        add_scenario(&inst, b, prob);
        push_job(&inst, b, 0, PathBundle{std::move(path)}, value);
      }
    }
  }
  return inst;
}

Instance gen_random_interval(const RandomIntervalParams& p) {
  if (p.items < 1 || p.buyers < 1 || p.scenarios < 1 || p.jobs_per_scenario < 1 ||
      p.max_len < 1) {
    fail(ErrorKind::invalid_input, "generator parameters must be positive");
  }
  Rng rng(p.seed);
  Instance inst;
  inst.topology = LineTopology{p.items};
  inst.items.resize(p.items);
  for (auto& item : inst.items) {
    item.capacity = rng.uniform_int(p.cap_lo, p.cap_hi);
    if (p.with_costs) {
      // Non-decreasing by construction: sorted draws from a 1/4 grid.
      std::vector<int> steps(item.capacity);
      for (auto& s : steps) s = rng.uniform_int(0, 8);
      std::sort(steps.begin(), steps.end());
      for (int s : steps) {
        item.costs.push_back(s / 4.0);
        item.costs_exact.push_back(Rat(s, 4));
      }
    }
  }
  for (int b = 0; b < p.buyers; ++b) {
    int bi = add_buyer(&inst);
    int count = rng.uniform_int(1, p.scenarios);
    for (int s = 0; s < count; ++s) {
      // Dyadic probabilities keep save/load exact.
      add_scenario(&inst, bi, Rat(rng.uniform_int(1, 64 / count), 64));
      int jobs = rng.uniform_int(1, p.jobs_per_scenario);
      for (int q = 0; q < jobs; ++q) {
        int len = rng.uniform_int(1, std::min(p.max_len, p.items));
        int first = rng.uniform_int(0, p.items - len);
        Job cand;
        cand.bundle = IntervalBundle{first, first + len - 1};
        cand.value = 0;
        Rat value = draw_value(&rng, p.value_lo, p.value_hi);
        cand.value = value.to_double();
        bool redundant = false;
        for (int j : inst.buyers[bi].scenarios[s].jobs) {
          if (dominates(inst.jobs[j], cand) || dominates(cand, inst.jobs[j])) redundant = true;
        }
        if (redundant) continue;
        push_job(&inst, bi, s, cand.bundle, value);
      }
    }
  }
  return inst;
}

Instance gen_random_tree(const RandomTreeParams& p) {
  if (p.edges < 1 || p.buyers < 1 || p.scenarios < 1) {
    fail(ErrorKind::invalid_input, "generator parameters must be positive");
  }
  Rng rng(p.seed);
  Instance inst;
  TreeTopology topo;
  topo.parents.resize(p.edges);
  for (int e = 0; e < p.edges; ++e) topo.parents[e] = rng.uniform_int(0, e);  // uniform attachment
  TreeTopology shape = topo;
  inst.topology = std::move(topo);
  inst.items.resize(p.edges);
  for (auto& item : inst.items) item.capacity = rng.uniform_int(p.cap_lo, p.cap_hi);

  TreeView tv = build_tree_view(shape, 0);
  auto path_between = [&](int u, int v) {
    std::vector<int> left, right;
    while (u != v) {
      if (tv.vertex_depth[u] >= tv.vertex_depth[v]) {
        left.push_back(tv.up_edge[u]);
        u = tv.high_vertex[tv.up_edge[u]];
      } else {
        right.push_back(tv.up_edge[v]);
        v = tv.high_vertex[tv.up_edge[v]];
      }
    }
    left.insert(left.end(), right.rbegin(), right.rend());
    return left;
  };

  for (int b = 0; b < p.buyers; ++b) {
    int bi = add_buyer(&inst);
    int count = rng.uniform_int(1, p.scenarios);
    for (int s = 0; s < count; ++s) {
      add_scenario(&inst, bi, Rat(rng.uniform_int(1, 64 / count), 64));
      int u = rng.uniform_int(0, p.edges);
      int v = rng.uniform_int(0, p.edges);
      while (v == u) v = rng.uniform_int(0, p.edges);
      push_job(&inst, bi, s, PathBundle{path_between(u, v)}, draw_value(&rng, p.value_lo, p.value_hi));
    }
  }
  return inst;
}

}  // namespace pm
