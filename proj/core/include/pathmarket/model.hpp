#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pathmarket/rational.hpp"

namespace pm {

// Comparison tolerance used throughout for floating-point guards.
inline constexpr double kTol = 1e-9;

struct LineTopology {
  int items = 0;
};

// Rooted tree over vertices 0..n (n = edge count). Edge e joins vertex e+1 to
// vertex parents[e], with parents[e] <= e so vertex 0 is always the root of
// the stored form. Algorithms may re-root via TreeView without renaming edges.
struct TreeTopology {
  std::vector<int> parents;
};

using Topology = std::variant<LineTopology, TreeTopology>;

struct Item {
  int capacity = 1;
  // Optional per-copy production costs, non-decreasing; when present the
  // sequence length must equal capacity. Absent means free up to capacity.
  std::vector<double> costs;
  std::vector<Rat> costs_exact;
};

// Contiguous run of line items, both ends inclusive.
struct IntervalBundle {
  int first = 0;
  int last = 0;
};

// Edge set forming a simple path in the tree.
struct PathBundle {
  std::vector<int> edges;
};

using Bundle = std::variant<IntervalBundle, PathBundle>;

struct Job {
  int id = 0;
  int buyer = 0;
  int scenario = 0;  // index into the owning buyer's scenario list
  Bundle bundle;
  double value = 0;
  Rat value_exact;
};

struct Scenario {
  double prob = 0;
  Rat prob_exact;
  std::vector<int> jobs;  // ids into Instance::jobs
};

struct Buyer {
  std::vector<Scenario> scenarios;
};

struct Instance {
  Topology topology;
  std::vector<Item> items;  // one per line item or tree edge
  std::vector<Buyer> buyers;
  std::vector<Job> jobs;  // flat list; jobs[j].id == j

  bool is_line() const { return std::holds_alternative<LineTopology>(topology); }
  int item_count() const { return static_cast<int>(items.size()); }
  int job_count() const { return static_cast<int>(jobs.size()); }
  int buyer_count() const { return static_cast<int>(buyers.size()); }
};

// Per-job fractional weights, dense over job ids.
struct FractionalAllocation {
  std::vector<double> w;

  explicit FractionalAllocation(int jobs = 0) : w(jobs, 0.0) {}
  double operator[](int j) const { return w[j]; }
  double& operator[](int j) { return w[j]; }
  int size() const { return static_cast<int>(w.size()); }
};

// One realized scenario index per buyer; -1 means the buyer did not show up.
struct Realization {
  std::vector<int> scenario;
};

class Rng;

// Independent per-buyer scenario draw; one uniform variate per buyer.
Realization draw_realization(const Instance& inst, Rng& rng);

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

int job_length(const Job& job);
std::vector<int> job_items(const Job& job);
bool job_uses_item(const Job& job, int item);
double job_density(const Job& job);

// Max job length; 1 on empty instances.
int length_scale(const Instance& inst);
// Max over min job value; 1 on empty instances.
double value_spread(const Instance& inst);
int min_capacity(const Instance& inst);
int max_capacity(const Instance& inst);

double frac_weight(const FractionalAllocation& x);
double frac_weight(const FractionalAllocation& x, const std::vector<int>& jobs);
double frac_value(const Instance& inst, const FractionalAllocation& x);
double frac_value(const Instance& inst, const FractionalAllocation& x, const std::vector<int>& jobs);
// Sum over jobs covering `item` of density times weight; a per-item share of
// frac_value, summing back to it over all items.
double item_frac_value(const Instance& inst, const FractionalAllocation& x, int item);
// Total fractional load Sum_{j covering item} x_j.
double item_frac_weight(const Instance& inst, const FractionalAllocation& x, int item);
// frac_value minus production cost, where each item's load fills its copies
// in order: full copies pay their whole cost, the last partial copy pays a
// pro-rata share. Items without cost schedules are free.
double frac_value_with_costs(const Instance& inst, const FractionalAllocation& x);

ValidationReport validate_instance(const Instance& inst);

// Orientation of a tree topology from an arbitrary root vertex. Edge ids are
// those of the stored topology; only depths and directions depend on the root.
struct TreeView {
  int root = 0;
  int edge_count = 0;
  std::vector<int> edge_depth;      // root-incident edges have depth 1
  std::vector<int> parent_edge;     // next edge toward the root, -1 at depth 1
  std::vector<int> deep_vertex;     // endpoint of the edge farther from the root
  std::vector<int> high_vertex;     // endpoint nearer the root
  std::vector<int> vertex_depth;    // root has depth 0
  std::vector<int> up_edge;         // per vertex, edge toward the root; -1 at root
  std::vector<std::vector<int>> child_edges;  // per edge, edges hanging below its deep vertex, ascending id
  std::vector<int> root_edges;      // edges incident to the root, ascending id
  std::vector<int> tin, tout;       // preorder interval per vertex for subtree tests

  // True when `e` lies on the root path of `f` (including e == f).
  bool edge_in_subtree(int f, int e) const {
    return tin[deep_vertex[e]] <= tin[deep_vertex[f]] && tin[deep_vertex[f]] < tout[deep_vertex[e]];
  }
};

TreeView build_tree_view(const TreeTopology& topo, int root = 0);

}  // namespace pm
