#include "pathmarket/tree_layering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "pathmarket/error.hpp"

namespace pm {

namespace {

const TreeTopology& require_tree(const Instance& inst, const FractionalAllocation& x) {
  const TreeTopology* topo = std::get_if<TreeTopology>(&inst.topology);
  if (!topo) fail(ErrorKind::invalid_input, "tree instance required");
  if (x.size() != inst.job_count())
    fail(ErrorKind::invalid_input, "allocation size does not match job count");
  return *topo;
}

// Arms ordered by decreasing depth of their top edge, so lower-reaching arms
// come first; nested terminating arms then list shortest to longest.
struct DepthOrder {
  const TreeView& view;
  const std::vector<Arm>& arms;
  bool operator()(int a, int b) const {
    int da = view.edge_depth[arms[a].edges.front()];
    int db = view.edge_depth[arms[b].edges.front()];
    if (da != db) return da > db;
    if (arms[a].job != arms[b].job) return arms[a].job < arms[b].job;
    return arms[a].side < arms[b].side;
  }
};

}  // namespace

ArmDecomposition decompose_arms(const TreeView& view, const Job& job) {
  const PathBundle* pb = std::get_if<PathBundle>(&job.bundle);
  if (!pb) fail(ErrorKind::invalid_input, "path bundle required");
  if (pb->edges.empty()) fail(ErrorKind::invalid_input, "empty path bundle");
  std::vector<char> mask(view.edge_count, 0);
  for (int e : pb->edges) {
    if (e < 0 || e >= view.edge_count) fail(ErrorKind::invalid_input, "edge id out of range");
    if (mask[e]) fail(ErrorKind::invalid_input, "duplicate edge in path bundle");
    mask[e] = 1;
  }
  ArmDecomposition out;
  out.job = job.id;
  for (int e : pb->edges) {
    int p = view.parent_edge[e];
    if (p < 0 || !mask[p]) out.peak.push_back(e);
  }
  std::sort(out.peak.begin(), out.peak.end());
  if (out.peak.size() > 2 ||
      (out.peak.size() == 2 && view.high_vertex[out.peak[0]] != view.high_vertex[out.peak[1]]))
    fail(ErrorKind::invalid_input, "edge set is not a simple path");
  auto walk = [&](int start) {
    std::vector<int> chain;
    int cur = start;
    while (true) {
      chain.push_back(cur);
      int next = -1;
      for (int c : view.child_edges[cur])
        if (mask[c]) {
          if (next >= 0) fail(ErrorKind::invalid_input, "edge set is not a simple path");
          next = c;
        }
      if (next < 0) break;
      cur = next;
    }
    return chain;
  };
  out.left = walk(out.peak[0]);
  if (out.peak.size() == 2) out.right = walk(out.peak[1]);
  if (out.left.size() + out.right.size() != pb->edges.size())
    fail(ErrorKind::invalid_input, "edge set is not a simple path");
  return out;
}

std::vector<Arm> collect_arms(const Instance& inst, const TreeView& view,
                              const FractionalAllocation& x) {
  if (x.size() != inst.job_count())
    fail(ErrorKind::invalid_input, "allocation size does not match job count");
  std::vector<Arm> arms;
  for (int j = 0; j < inst.job_count(); ++j) {
    if (x[j] <= kTol) continue;
    ArmDecomposition d = decompose_arms(view, inst.jobs[j]);
    arms.push_back({j, 0, std::move(d.left)});
    if (!d.right.empty()) arms.push_back({j, 1, std::move(d.right)});
  }
  return arms;
}

PeelResult peel(const TreeView& view, const std::vector<Arm>& arms,
                const FractionalAllocation& y) {
  int ne = view.edge_count;
  int na = static_cast<int>(arms.size());
  PeelResult res;
  res.fw.assign(ne, 0.0);
  double total = 0;
  for (const Arm& a : arms) {
    double w = y[a.job];
    total += w;
    for (int e : a.edges) res.fw[e] += w;
  }
  if (total <= kTol) fail(ErrorKind::invalid_input, "peel requires nonzero weight");

  // Deepest overloaded edge; everything strictly below it carries at most 6.
  int t = -1;
  for (int e = 0; e < ne; ++e)
    if (res.fw[e] > 6 + kTol && (t < 0 || view.edge_depth[e] > view.edge_depth[t])) t = e;
  if (t < 0) {
    res.kept.resize(na);
    std::iota(res.kept.begin(), res.kept.end(), 0);
    return res;
  }

  DepthOrder order{view, arms};
  std::vector<int> term;
  double termw = 0;
  for (int i = 0; i < na; ++i)
    if (arms[i].edges.back() == t) {
      term.push_back(i);
      termw += y[arms[i].job];
    }

  if (termw > 3.0) {
    // Nested arms ending at t: take just enough weight, shortest first, and
    // give the last unit of it away so the span loses a full unit.
    std::sort(term.begin(), term.end(), order);
    std::size_t ell = 0;
    double cum = 0;
    while (ell < term.size()) {
      cum += y[arms[term[ell]].job];
      ++ell;
      if (cum >= 3.0) break;
    }
    if (cum < 3.0) fail(ErrorKind::numerical, "terminating arm weight fell short");
    double tail = 0;
    std::size_t cut = 0;
    for (std::size_t i = ell; i-- > 0;) {
      tail += y[arms[term[i]].job];
      if (tail >= 1.0) {
        cut = i;
        break;
      }
    }
    res.kept.assign(term.begin(), term.begin() + cut + 1);
    res.dropped.assign(term.begin() + cut + 1, term.begin() + ell);
  } else {
    // Arms continue below t. Gather child subtrees in index order until
    // their through-weight reaches 3; split those through-arms so the kept
    // prefix holds two thirds of the weight, and keep the gathered subtrees'
    // internal arms wholesale.
    std::vector<int> next_child(na, -1);
    std::vector<double> child_w(ne, 0.0);
    for (int i = 0; i < na; ++i) {
      const std::vector<int>& es = arms[i].edges;
      auto it = std::find(es.begin(), es.end(), t);
      if (it == es.end() || it + 1 == es.end()) continue;
      next_child[i] = *(it + 1);
      child_w[*(it + 1)] += y[arms[i].job];
    }
    const std::vector<int>& kids = view.child_edges[t];
    double cum = 0;
    std::size_t m = 0;
    while (m < kids.size()) {
      cum += child_w[kids[m]];
      ++m;
      if (cum >= 3.0) break;
    }
    if (cum < 3.0) fail(ErrorKind::numerical, "no child prefix reaches the peel threshold");
    std::vector<char> in_prefix(ne, 0);
    for (std::size_t i = 0; i < m; ++i) in_prefix[kids[i]] = 1;

    std::vector<int> through;
    double c = 0;
    for (int i = 0; i < na; ++i)
      if (next_child[i] >= 0 && in_prefix[next_child[i]]) {
        through.push_back(i);
        c += y[arms[i].job];
      }
    std::sort(through.begin(), through.end(), order);
    double prefix = 0;
    std::size_t cut = through.size();
    for (std::size_t i = 0; i < through.size(); ++i) {
      prefix += y[arms[through[i]].job];
      if (3 * prefix >= 2 * c) {
        cut = i + 1;
        break;
      }
    }
    double last = y[arms[through[cut - 1]].job];
    if (prefix > 7 + kTol || c - prefix + last < 1 - kTol)
      fail(ErrorKind::numerical, "through-arm split out of bounds");
    res.kept.assign(through.begin(), through.begin() + cut);
    res.dropped.assign(through.begin() + cut, through.end());
    for (int i = 0; i < na; ++i) {
      if (next_child[i] >= 0) continue;
      int top = arms[i].edges.front();
      for (std::size_t ci = 0; ci < m; ++ci)
        if (view.edge_in_subtree(top, kids[ci])) {
          res.kept.push_back(i);
          break;
        }
    }
  }

  std::map<std::pair<int, int>, int> by_id;
  for (int i = 0; i < na; ++i) by_id[{arms[i].job, arms[i].side}] = i;
  std::vector<char> in_jd(na, 0);
  for (int i : res.kept) in_jd[i] = 1;
  for (int i : res.dropped) in_jd[i] = 1;
  for (int i : res.dropped) {
    auto it = by_id.find({arms[i].job, 1 - arms[i].side});
    if (it == by_id.end() || in_jd[it->second]) continue;
    res.siblings.push_back(it->second);
  }
  std::sort(res.kept.begin(), res.kept.end());
  std::sort(res.dropped.begin(), res.dropped.end());
  std::sort(res.siblings.begin(), res.siblings.end());
  return res;
}

LayeredAllocation build_layered_allocation(const Instance& inst, const FractionalAllocation& x,
                                           int root) {
  const TreeTopology& topo = require_tree(inst, x);
  int ne = inst.item_count();
  if (root < 0 || root > ne) fail(ErrorKind::invalid_input, "root vertex out of range");
  TreeView view = build_tree_view(topo, root);
  std::vector<Arm> arms = collect_arms(inst, view, x);

  LayeredAllocation out;
  out.root = root;
  out.weights = FractionalAllocation(inst.job_count());
  out.job_layers.assign(inst.job_count(), {-1, -1});

  std::vector<int> active(arms.size());
  std::iota(active.begin(), active.end(), 0);
  std::vector<int> consumed(ne, 0);
  std::set<std::pair<int, int>> cut;
  while (!active.empty()) {
    std::vector<Arm> sub;
    sub.reserve(active.size());
    for (int i : active) sub.push_back(arms[i]);
    PeelResult res = peel(view, sub, x);
    if (res.kept.empty()) fail(ErrorKind::numerical, "peel kept no arms");

    TreeLayer layer;
    std::vector<char> used(ne, 0);
    for (int i : res.kept)
      for (int e : sub[i].edges) used[e] = 1;
    for (int e = 0; e < ne; ++e)
      if (used[e]) {
        if (consumed[e] >= inst.items[e].capacity)
          fail(ErrorKind::numerical, "layer demand exceeds edge supply");
        layer.copies.emplace_back(e, consumed[e]++);
      }
    for (int i : res.kept) layer.arms.emplace_back(sub[i].job, sub[i].side);
    std::sort(layer.arms.begin(), layer.arms.end());
    out.layers.push_back(std::move(layer));

    // A drop kills the whole job: its sibling arm leaves too, even when that
    // arm was already placed in an earlier layer.
    std::vector<char> gone(sub.size(), 0);
    for (int i : res.kept) gone[i] = 1;
    for (int i : res.dropped) {
      gone[i] = 1;
      cut.insert({sub[i].job, 0});
      cut.insert({sub[i].job, 1});
    }
    for (int i : res.siblings) gone[i] = 1;
    std::vector<int> next_active;
    for (std::size_t p = 0; p < active.size(); ++p)
      if (!gone[p]) next_active.push_back(active[p]);
    active = std::move(next_active);
  }

  // Sibling drops from later rounds retract arms already placed in layers.
  for (TreeLayer& layer : out.layers) {
    std::vector<std::pair<int, int>> keep;
    for (const auto& arm : layer.arms)
      if (!cut.count(arm)) keep.push_back(arm);
    layer.arms = std::move(keep);
  }
  std::vector<char> dead(inst.job_count(), 0);
  for (const auto& [j, s] : cut) dead[j] = 1;
  for (int j = 0; j < inst.job_count(); ++j)
    if (x[j] > kTol && !dead[j]) out.weights[j] = x[j] / 7;
  for (int k = 0; k < static_cast<int>(out.layers.size()); ++k)
    for (const auto& [j, s] : out.layers[k].arms) {
      if (s == 0)
        out.job_layers[j].first = k;
      else
        out.job_layers[j].second = k;
    }

  // Remaining copies fill arm-free layers, one per leftover rank.
  for (int r = 0;; ++r) {
    TreeLayer filler;
    for (int e = 0; e < ne; ++e)
      if (consumed[e] + r < inst.items[e].capacity) filler.copies.emplace_back(e, consumed[e] + r);
    if (filler.copies.empty()) break;
    out.layers.push_back(std::move(filler));
  }
  return out;
}

ValidationReport validate_layered_allocation(const Instance& inst, const LayeredAllocation& la) {
  ValidationReport rep;
  const TreeTopology* topo = std::get_if<TreeTopology>(&inst.topology);
  if (!topo) {
    rep.problems.push_back("tree instance required");
    return rep;
  }
  int n = inst.job_count(), ne = inst.item_count();
  if (la.weights.size() != n || static_cast<int>(la.job_layers.size()) != n) {
    rep.problems.push_back("weight or layer-pair size mismatch");
    return rep;
  }

  long long supply = 0;
  for (int e = 0; e < ne; ++e) supply += inst.items[e].capacity;
  std::set<std::pair<int, int>> seen;
  for (const TreeLayer& layer : la.layers)
    for (const auto& [e, r] : layer.copies) {
      if (e < 0 || e >= ne || r < 0 || r >= inst.items[e].capacity)
        rep.problems.push_back("edge copy out of range");
      else if (!seen.insert({e, r}).second)
        rep.problems.push_back("duplicate edge copy");
    }
  if (static_cast<long long>(seen.size()) != supply)
    rep.problems.push_back("copies do not partition the supply");

  TreeView view = build_tree_view(*topo, la.root);
  std::map<std::pair<int, int>, int> appearances;
  for (int k = 0; k < static_cast<int>(la.layers.size()); ++k) {
    const TreeLayer& layer = la.layers[k];
    std::vector<char> mask(ne, 0);
    for (const auto& [e, r] : layer.copies)
      if (e >= 0 && e < ne) mask[e] = 1;
    std::vector<double> load(ne, 0.0);
    for (const auto& [j, s] : layer.arms) {
      if (j < 0 || j >= n || s < 0 || s > 1) {
        rep.problems.push_back("layer arm id out of range");
        continue;
      }
      if (la.weights[j] <= kTol) rep.problems.push_back("layer arm of zero-weight job");
      ArmDecomposition d = decompose_arms(view, inst.jobs[j]);
      const std::vector<int>& edges = s == 0 ? d.left : d.right;
      if (edges.empty()) rep.problems.push_back("empty arm assigned to a layer");
      for (int e : edges) {
        if (!mask[e]) rep.problems.push_back("arm edge outside its layer");
        load[e] += la.weights[j];
      }
      appearances[{j, s}]++;
      int recorded = s == 0 ? la.job_layers[j].first : la.job_layers[j].second;
      if (recorded != k) rep.problems.push_back("job layer pair mismatch");
    }
    for (int e = 0; e < ne; ++e)
      if (load[e] > 1 + 1e-9) rep.problems.push_back("layer edge weight above one");
  }
  for (int j = 0; j < n; ++j) {
    if (la.weights[j] <= kTol) {
      if (la.job_layers[j].first >= 0 || la.job_layers[j].second >= 0)
        rep.problems.push_back("zero-weight job holds a layer assignment");
      continue;
    }
    ArmDecomposition d = decompose_arms(view, inst.jobs[j]);
    if (appearances[{j, 0}] != 1) rep.problems.push_back("left arm not in exactly one layer");
    int want_right = d.right.empty() ? 0 : 1;
    if (appearances[{j, 1}] != want_right)
      rep.problems.push_back("right arm layer count mismatch");
  }
  return rep;
}

std::pair<std::vector<int>, FractionalAllocation> partition_value_classes(
    const Instance& inst, const FractionalAllocation& y) {
  if (y.size() != inst.job_count())
    fail(ErrorKind::invalid_input, "allocation size does not match job count");
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0;
  bool any = false;
  for (int j = 0; j < inst.job_count(); ++j)
    if (y[j] > kTol) {
      any = true;
      vmin = std::min(vmin, inst.jobs[j].value);
      vmax = std::max(vmax, inst.jobs[j].value);
    }
  if (!any) fail(ErrorKind::invalid_input, "allocation has no support");

  int nclasses = 1;
  if (vmin > kTol && vmax / vmin > 1 + 1e-12)
    nclasses = std::max(1, static_cast<int>(std::ceil(std::log2(vmax / vmin) - 1e-12)));
  auto class_of = [&](double v) {
    if (nclasses == 1 || v <= vmin) return 0;
    int c = static_cast<int>(std::floor(std::log2(v / vmin) + 1e-12));
    return std::clamp(c, 0, nclasses - 1);
  };
  std::vector<double> class_value(nclasses, 0.0);
  for (int j = 0; j < inst.job_count(); ++j)
    if (y[j] > kTol) class_value[class_of(inst.jobs[j].value)] += y[j] * inst.jobs[j].value;
  int best = 0;
  for (int c = 1; c < nclasses; ++c)
    if (class_value[c] > class_value[best]) best = c;

  std::vector<int> jobs;
  FractionalAllocation restricted(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j)
    if (y[j] > kTol && class_of(inst.jobs[j].value) == best) {
      jobs.push_back(j);
      restricted[j] = y[j];
    }
  return {std::move(jobs), std::move(restricted)};
}

std::vector<MarketSegment> tree_large_market_split(const Instance& inst,
                                                   const FractionalAllocation& y) {
  require_tree(inst, y);
  int ne = inst.item_count(), n = inst.job_count();
  int B = min_capacity(inst);
  std::vector<MarketSegment> out;
  if (B < 2) {
    MarketSegment seg;
    seg.jobs.resize(n);
    std::iota(seg.jobs.begin(), seg.jobs.end(), 0);
    seg.allocation = y;
    seg.capacities.resize(ne);
    for (int e = 0; e < ne; ++e) seg.capacities[e] = inst.items[e].capacity;
    seg.copy_offset.assign(ne, 0);
    out.push_back(std::move(seg));
    return out;
  }

  double vmin = std::numeric_limits<double>::infinity(), vmax = 1;
  bool any = false;
  for (int j = 0; j < n; ++j)
    if (y[j] > kTol) {
      any = true;
      vmin = std::min(vmin, inst.jobs[j].value);
      vmax = std::max(vmax, inst.jobs[j].value);
    }
  if (!any) vmin = vmax = 1;
  double spread = vmin > kTol ? vmax / vmin : 1.0;
  int k = std::max(1, B / 2);
  auto band_of = [&](double v) {
    if (spread <= 1 + 1e-12 || v <= vmin) return 1;
    int b = static_cast<int>(std::ceil(k * std::log2(v / vmin) / std::log2(spread) - 1e-9));
    return std::clamp(b, 1, k);
  };
  for (int i = 1; i <= k; ++i) {
    MarketSegment seg;
    seg.copy_offset.assign(ne, 0);
    seg.capacities.assign(ne, 0);
    FractionalAllocation half(n);
    for (int j = 0; j < n; ++j)
      if (band_of(inst.jobs[j].value) == i) {
        seg.jobs.push_back(j);
        half[j] = y[j] / 2;
      }
    for (int e = 0; e < ne; ++e) {
      double w = item_frac_weight(inst, half, e);
      seg.capacities[e] = w <= kTol ? 0 : static_cast<int>(std::ceil(w - kTol));
    }
    seg.allocation = std::move(half);
    out.push_back(std::move(seg));
  }
  std::vector<int> used(ne, 0);
  for (MarketSegment& seg : out)
    for (int e = 0; e < ne; ++e) {
      seg.copy_offset[e] = used[e];
      used[e] += seg.capacities[e];
    }
  for (int e = 0; e < ne; ++e)
    if (used[e] > inst.items[e].capacity)
      fail(ErrorKind::numerical, "band supply exceeds edge capacity");
  return out;
}

}  // namespace pm
