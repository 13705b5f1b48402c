#include "pathmarket/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "pathmarket/error.hpp"
#include "pathmarket/rng.hpp"

namespace pm {

int job_length(const Job& job) {
  if (const auto* iv = std::get_if<IntervalBundle>(&job.bundle)) return iv->last - iv->first + 1;
  return static_cast<int>(std::get<PathBundle>(job.bundle).edges.size());
}

std::vector<int> job_items(const Job& job) {
  std::vector<int> out;
  if (const auto* iv = std::get_if<IntervalBundle>(&job.bundle)) {
    out.reserve(iv->last - iv->first + 1);
    for (int t = iv->first; t <= iv->last; ++t) out.push_back(t);
  } else {
    out = std::get<PathBundle>(job.bundle).edges;
  }
  return out;
}

bool job_uses_item(const Job& job, int item) {
  if (const auto* iv = std::get_if<IntervalBundle>(&job.bundle)) {
    return iv->first <= item && item <= iv->last;
  }
  const auto& edges = std::get<PathBundle>(job.bundle).edges;
  return std::find(edges.begin(), edges.end(), item) != edges.end();
}

double job_density(const Job& job) { return job.value / job_length(job); }

int length_scale(const Instance& inst) {
  int L = 1;
  for (const auto& job : inst.jobs) L = std::max(L, job_length(job));
  return L;
}

double value_spread(const Instance& inst) {
  double lo = 0, hi = 0;
  for (const auto& job : inst.jobs) {
    if (lo == 0 || job.value < lo) lo = job.value;
    hi = std::max(hi, job.value);
  }
  return lo > 0 ? hi / lo : 1.0;
}

int min_capacity(const Instance& inst) {
  int b = inst.items.empty() ? 1 : inst.items[0].capacity;
  for (const auto& item : inst.items) b = std::min(b, item.capacity);
  return b;
}

int max_capacity(const Instance& inst) {
  int b = 1;
  for (const auto& item : inst.items) b = std::max(b, item.capacity);
  return b;
}

double frac_weight(const FractionalAllocation& x) {
  return std::accumulate(x.w.begin(), x.w.end(), 0.0);
}

double frac_weight(const FractionalAllocation& x, const std::vector<int>& jobs) {
  double s = 0;
  for (int j : jobs) s += x[j];
  return s;
}

double frac_value(const Instance& inst, const FractionalAllocation& x) {
  double s = 0;
  for (const auto& job : inst.jobs) s += job.value * x[job.id];
  return s;
}

double frac_value(const Instance& inst, const FractionalAllocation& x, const std::vector<int>& jobs) {
  double s = 0;
  for (int j : jobs) s += inst.jobs[j].value * x[j];
  return s;
}

double item_frac_value(const Instance& inst, const FractionalAllocation& x, int item) {
  double s = 0;
  for (const auto& job : inst.jobs) {
    if (x[job.id] > 0 && job_uses_item(job, item)) s += job_density(job) * x[job.id];
  }
  return s;
}

double item_frac_weight(const Instance& inst, const FractionalAllocation& x, int item) {
  double s = 0;
  for (const auto& job : inst.jobs) {
    if (x[job.id] > 0 && job_uses_item(job, item)) s += x[job.id];
  }
  return s;
}

double frac_value_with_costs(const Instance& inst, const FractionalAllocation& x) {
  double total = frac_value(inst, x);
  for (int t = 0; t < inst.item_count(); ++t) {
    const auto& costs = inst.items[t].costs;
    if (costs.empty()) continue;
    double load = item_frac_weight(inst, x, t);
    int full = static_cast<int>(std::floor(load + kTol));
    for (int r = 0; r < full && r < static_cast<int>(costs.size()); ++r) total -= costs[r];
    double frac = load - full;
    if (frac > kTol && full < static_cast<int>(costs.size())) total -= frac * costs[full];
  }
  return total;
}

namespace {

// A nonempty edge set is a simple path iff the induced subgraph is connected
// with no repeated edge and every vertex degree is at most 2.
bool edges_form_path(const TreeTopology& topo, const std::vector<int>& edges, std::string* why) {
  int n = static_cast<int>(topo.parents.size());
  std::set<int> seen;
  std::map<int, int> degree;
  for (int e : edges) {
    if (e < 0 || e >= n) {
      *why = "edge id out of range";
      return false;
    }
    if (!seen.insert(e).second) {
      *why = "repeated edge";
      return false;
    }
    ++degree[e + 1];
    ++degree[topo.parents[e]];
  }
  for (auto [v, d] : degree) {
    if (d > 2) {
      *why = "vertex " + std::to_string(v) + " has degree " + std::to_string(d);
      return false;
    }
  }
  // Walk from one endpoint; a path visits every edge exactly once.
  std::map<int, std::vector<int>> adj;  // vertex -> incident path edges
  for (int e : edges) {
    adj[e + 1].push_back(e);
    adj[topo.parents[e]].push_back(e);
  }
  int start = -1;
  for (auto& [v, es] : adj) {
    if (es.size() == 1) start = v;
  }
  if (start == -1) start = adj.begin()->first;  // cycle would fail the count below
  std::set<int> used;
  int at = start;
  int prev_edge = -1;
  while (true) {
    int next = -1;
    for (int e : adj[at]) {
      if (e != prev_edge && !used.count(e)) {
        next = e;
        break;
      }
    }
    if (next == -1) break;
    used.insert(next);
    at = (at == next + 1) ? topo.parents[next] : next + 1;
    prev_edge = next;
  }
  if (used.size() != edges.size()) {
    *why = "edge set is disconnected or cyclic";
    return false;
  }
  return true;
}

bool bundle_contains(const Job& outer, const Job& inner) {
  if (const auto* oi = std::get_if<IntervalBundle>(&outer.bundle)) {
    const auto& ii = std::get<IntervalBundle>(inner.bundle);
    return oi->first <= ii.first && ii.last <= oi->last;
  }
  const auto& oe = std::get<PathBundle>(outer.bundle).edges;
  const auto& ie = std::get<PathBundle>(inner.bundle).edges;
  std::set<int> os(oe.begin(), oe.end());
  for (int e : ie) {
    if (!os.count(e)) return false;
  }
  return true;
}

}  // namespace

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  auto add = [&rep](const std::string& s) { rep.problems.push_back(s); };

  int n = inst.item_count();
  if (inst.is_line()) {
    if (std::get<LineTopology>(inst.topology).items != n) add("item list does not match line length");
  } else {
    const auto& topo = std::get<TreeTopology>(inst.topology);
    if (static_cast<int>(topo.parents.size()) != n) add("item list does not match tree edge count");
    for (int e = 0; e < static_cast<int>(topo.parents.size()); ++e) {
      if (topo.parents[e] < 0 || topo.parents[e] > e) {
        add("tree parent of vertex " + std::to_string(e + 1) + " out of range");
      }
    }
  }

  for (int t = 0; t < n; ++t) {
    const auto& item = inst.items[t];
    if (item.capacity < 1) add("item " + std::to_string(t) + " capacity below 1");
    if (!item.costs.empty()) {
      if (static_cast<int>(item.costs.size()) != item.capacity) {
        add("item " + std::to_string(t) + " cost sequence length differs from capacity");
      }
      for (size_t r = 0; r + 1 < item.costs.size(); ++r) {
        if (item.costs[r] > item.costs[r + 1] + kTol) {
          add("item " + std::to_string(t) + " costs decrease at copy " + std::to_string(r + 2));
        }
      }
      for (double c : item.costs) {
        if (c < 0) add("item " + std::to_string(t) + " has a negative cost");
      }
    }
  }

  std::vector<int> owner(inst.jobs.size(), -1);
  for (int b = 0; b < inst.buyer_count(); ++b) {
    const auto& buyer = inst.buyers[b];
    double mass = 0;
    for (int s = 0; s < static_cast<int>(buyer.scenarios.size()); ++s) {
      const auto& sc = buyer.scenarios[s];
      if (sc.prob <= 0 || sc.prob > 1 + kTol) {
        add("buyer " + std::to_string(b) + " scenario " + std::to_string(s) + " probability outside (0,1]");
      }
      mass += sc.prob;
      if (sc.jobs.empty()) add("buyer " + std::to_string(b) + " scenario " + std::to_string(s) + " has no jobs");
      for (int j : sc.jobs) {
        if (j < 0 || j >= inst.job_count()) {
          add("scenario references job id out of range");
          continue;
        }
        if (owner[j] != -1) add("job " + std::to_string(j) + " listed in more than one scenario");
        owner[j] = b;
        const auto& job = inst.jobs[j];
        if (job.id != j) add("job " + std::to_string(j) + " id mismatch");
        if (job.buyer != b || job.scenario != s) add("job " + std::to_string(j) + " owner fields mismatch");
      }
    }
    if (mass > 1 + kTol) add("buyer " + std::to_string(b) + " scenario mass exceeds 1");
  }
  for (int j = 0; j < inst.job_count(); ++j) {
    if (owner[j] == -1) add("job " + std::to_string(j) + " not listed in any scenario");
  }

  for (const auto& job : inst.jobs) {
    if (job.value <= 0) add("job " + std::to_string(job.id) + " value not positive");
    if (inst.is_line()) {
      const auto* iv = std::get_if<IntervalBundle>(&job.bundle);
      if (!iv) {
        add("job " + std::to_string(job.id) + " has a path bundle on a line topology");
        continue;
      }
      if (iv->first < 0 || iv->last >= n || iv->first > iv->last) {
        add("job " + std::to_string(job.id) + " interval out of range");
      }
    } else {
      const auto* pb = std::get_if<PathBundle>(&job.bundle);
      if (!pb) {
        add("job " + std::to_string(job.id) + " has an interval bundle on a tree topology");
        continue;
      }
      if (pb->edges.empty()) {
        add("job " + std::to_string(job.id) + " path is empty");
        continue;
      }
      std::string why;
      if (!edges_form_path(std::get<TreeTopology>(inst.topology), pb->edges, &why)) {
        add("job " + std::to_string(job.id) + " bundle is not a simple path: " + why);
      }
    }
  }

  // Within a scenario a bundle that contains another bundle of no larger value
  // is dominated; monotone valuations never need it.
  for (const auto& buyer : inst.buyers) {
    for (const auto& sc : buyer.scenarios) {
      for (int a : sc.jobs) {
        for (int b : sc.jobs) {
          if (a == b) continue;
          if (a < 0 || b < 0 || a >= inst.job_count() || b >= inst.job_count()) continue;
          const auto& outer = inst.jobs[a];
          const auto& inner = inst.jobs[b];
          if (job_length(outer) > job_length(inner) && bundle_contains(outer, inner) &&
              outer.value <= inner.value + kTol) {
            add("job " + std::to_string(a) + " is dominated by job " + std::to_string(b));
          }
        }
      }
    }
  }

  return rep;
}

TreeView build_tree_view(const TreeTopology& topo, int root) {
  int n = static_cast<int>(topo.parents.size());
  int vcount = n + 1;
  if (root < 0 || root >= vcount) fail(ErrorKind::invalid_input, "root vertex out of range");
  TreeView tv;
  tv.root = root;
  tv.edge_count = n;
  tv.edge_depth.assign(n, 0);
  tv.parent_edge.assign(n, -1);
  tv.deep_vertex.assign(n, -1);
  tv.high_vertex.assign(n, -1);
  tv.vertex_depth.assign(vcount, -1);
  tv.up_edge.assign(vcount, -1);
  tv.child_edges.assign(n, {});
  tv.tin.assign(vcount, 0);
  tv.tout.assign(vcount, 0);

  std::vector<std::vector<std::pair<int, int>>> adj(vcount);  // (neighbor, edge)
  for (int e = 0; e < n; ++e) {
    adj[e + 1].push_back({topo.parents[e], e});
    adj[topo.parents[e]].push_back({e + 1, e});
  }
  for (auto& a : adj) std::sort(a.begin(), a.end(), [](auto& l, auto& r) { return l.second < r.second; });

  // Iterative DFS from the root; preorder stamps give subtree intervals.
  int clock = 0;
  std::vector<std::pair<int, size_t>> stack;
  tv.vertex_depth[root] = 0;
  tv.tin[root] = clock++;
  stack.push_back({root, 0});
  while (!stack.empty()) {
    auto& [v, idx] = stack.back();
    if (idx == adj[v].size()) {
      tv.tout[v] = clock;
      stack.pop_back();
      continue;
    }
    auto [u, e] = adj[v][idx++];
    if (tv.vertex_depth[u] != -1) continue;
    tv.vertex_depth[u] = tv.vertex_depth[v] + 1;
    tv.up_edge[u] = e;
    tv.edge_depth[e] = tv.vertex_depth[u];
    tv.deep_vertex[e] = u;
    tv.high_vertex[e] = v;
    tv.parent_edge[e] = tv.up_edge[v];
    tv.tin[u] = clock++;
    stack.push_back({u, 0});
  }
  for (int e = 0; e < n; ++e) {
    if (tv.parent_edge[e] >= 0) {
      tv.child_edges[tv.parent_edge[e]].push_back(e);
    } else {
      tv.root_edges.push_back(e);
    }
  }
  for (auto& ce : tv.child_edges) std::sort(ce.begin(), ce.end());
  std::sort(tv.root_edges.begin(), tv.root_edges.end());
  return tv;
}

Realization draw_realization(const Instance& inst, Rng& rng) {
  Realization real;
  real.scenario.assign(inst.buyer_count(), -1);
  for (int b = 0; b < inst.buyer_count(); ++b) {
    double u = rng.uniform01();
    double cum = 0;
    const auto& scenarios = inst.buyers[b].scenarios;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      cum += scenarios[i].prob;
      if (u < cum) {
        real.scenario[b] = static_cast<int>(i);
        break;
      }
    }
  }
  return real;
}

}  // namespace pm
