#include "pathmarket/interval_bundling.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <tuple>
#include <utility>

#include "pathmarket/error.hpp"

namespace pm {

namespace {

const IntervalBundle& line_span(const Job& job) { return std::get<IntervalBundle>(job.bundle); }

void require_line(const Instance& inst, const FractionalAllocation& x) {
  if (!inst.is_line()) fail(ErrorKind::invalid_input, "line topology required");
  if (inst.item_count() < 1) fail(ErrorKind::invalid_input, "instance has no items");
  if (x.size() != inst.job_count()) fail(ErrorKind::invalid_input, "allocation size mismatch");
}

void require_unit(const Instance& inst) {
  for (const Item& item : inst.items)
    if (item.capacity != 1) fail(ErrorKind::invalid_input, "unit capacities required");
}

void require_offsets(int max_offsets) {
  if (max_offsets < 1) fail(ErrorKind::invalid_input, "offset count must be positive");
}

int ceil_log2_int(long long n) {
  int p = 0;
  while ((1LL << p) < n) ++p;
  return p;
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  return q * b > a ? q - 1 : q;
}

// Smallest a with v <= 2^a, so v lies in (2^(a-1), 2^a]; near-powers snap down.
int value_scale_of(double v) {
  int e = 0;
  double f = std::frexp(v, &e);
  return f <= 0.5 * (1.0 + 1e-12) ? e - 1 : e;
}

std::vector<double> natural_values(const Instance& inst) {
  std::vector<double> v(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) v[j] = inst.jobs[j].value;
  return v;
}

UnitAllocation empty_allocation(int jobs) {
  UnitAllocation ua;
  ua.assignment.assign(jobs, -1);
  ua.weights = FractionalAllocation(jobs);
  return ua;
}

// Slice of the line the five-step construction runs on. Values are passed
// explicitly so cost-shifted layers reuse the same machinery.
struct Seg {
  const Instance* inst;
  const std::vector<double>* val;
  const FractionalAllocation* x;
  int lo, hi;
  std::vector<int> eligible;  // jobs inside [lo, hi] with positive weight and value

  int len() const { return hi - lo + 1; }
};

Seg make_seg(const Instance& inst, const std::vector<double>& val, const FractionalAllocation& x,
             int lo, int hi, const std::vector<int>& candidates) {
  Seg s{&inst, &val, &x, lo, hi, {}};
  for (int j : candidates) {
    const IntervalBundle& b = line_span(inst.jobs[j]);
    if (b.first >= lo && b.last <= hi && x[j] > kTol && val[j] > kTol) s.eligible.push_back(j);
  }
  return s;
}

// Per-item value shares fv[t] = sum over covering jobs of density * weight,
// indexed relative to seg.lo.
std::vector<double> item_value_shares(const Seg& s) {
  std::vector<double> fv(s.len(), 0.0);
  for (int j : s.eligible) {
    const Job& job = s.inst->jobs[j];
    const IntervalBundle& b = line_span(job);
    double d = (*s.val)[j] / job_length(job) * (*s.x)[j];
    for (int t = b.first; t <= b.last; ++t) fv[t - s.lo] += d;
  }
  return fv;
}

// Keeps jobs worth at least half the fractional value of their own interval.
std::vector<int> u1_filter(const Seg& s) {
  std::vector<double> fv = item_value_shares(s);
  std::vector<int> keep;
  for (int j : s.eligible) {
    const IntervalBundle& b = line_span(s.inst->jobs[j]);
    double over = 0;
    for (int t = b.first; t <= b.last; ++t) over += fv[t - s.lo];
    if ((*s.val)[j] >= 0.5 * over - kTol) keep.push_back(j);
  }
  return keep;
}

// Buckets jobs into dyadic cells at offset t0 and splits each bucket into
// contiguous components. Jobs straddling a cell boundary at their own scale
// are dropped; each surviving component spans more than a quarter of its cell.
std::vector<JobGroup> bucket_core(const Seg& s, const std::vector<int>& u1, long long t0,
                                  int lmax) {
  std::map<std::tuple<int, long long, int>, std::vector<int>> buckets;
  for (int j : u1) {
    const Job& job = s.inst->jobs[j];
    const IntervalBundle& b = line_span(job);
    int level = ceil_log2_int(job_length(job)) + 1;
    if (level > lmax) continue;
    long long width = 1LL << level;
    long long cell = floor_div(b.first - s.lo - t0, width);
    if (b.last - s.lo > t0 + (cell + 1) * width - 1) continue;
    buckets[{level, cell, value_scale_of((*s.val)[j])}].push_back(j);
  }
  std::vector<JobGroup> groups;
  for (auto& [key, jobs] : buckets) {
    std::sort(jobs.begin(), jobs.end(), [&](int a, int b) {
      const IntervalBundle& ia = line_span(s.inst->jobs[a]);
      const IntervalBundle& ib = line_span(s.inst->jobs[b]);
      return std::tie(ia.first, ia.last, a) < std::tie(ib.first, ib.last, b);
    });
    JobGroup g;
    g.level = std::get<0>(key);
    g.cell = std::get<1>(key);
    g.value_scale = std::get<2>(key);
    for (int j : jobs) {
      const IntervalBundle& b = line_span(s.inst->jobs[j]);
      if (!g.jobs.empty() && b.first > g.hi) {
        groups.push_back(g);
        int comp = g.component + 1;
        g = JobGroup{};
        g.level = std::get<0>(key);
        g.cell = std::get<1>(key);
        g.value_scale = std::get<2>(key);
        g.component = comp;
      }
      if (g.jobs.empty()) {
        g.lo = b.first;
        g.hi = b.last;
      } else {
        g.hi = std::max(g.hi, b.last);
      }
      g.jobs.push_back(j);
      g.weight += (*s.x)[j];
      g.value += (*s.val)[j] * (*s.x)[j];
    }
    if (!g.jobs.empty()) groups.push_back(g);
  }
  return groups;
}

// Bundles as absolute item ranges plus the jobs and weights they carry.
struct SegBundle {
  int lo = 0, hi = -1;
  std::vector<int> jobs;
};

struct SegAlloc {
  std::vector<SegBundle> bundles;
  std::vector<std::pair<int, double>> weights;  // (job, rescaled x)
  double value = 0;
};

// Completes a disjoint bundle list into a tiling of [lo, hi] with empty
// filler bundles.
void add_fillers(SegAlloc& a, int lo, int hi) {
  std::sort(a.bundles.begin(), a.bundles.end(),
            [](const SegBundle& u, const SegBundle& v) { return u.lo < v.lo; });
  std::vector<SegBundle> out;
  int at = lo;
  for (SegBundle& b : a.bundles) {
    if (b.lo > at) out.push_back(SegBundle{at, b.lo - 1, {}});
    at = b.hi + 1;
    out.push_back(std::move(b));
  }
  if (at <= hi) out.push_back(SegBundle{at, hi, {}});
  a.bundles = std::move(out);
}

SegAlloc filler_only(const Seg& s) {
  SegAlloc a;
  add_fillers(a, s.lo, s.hi);
  return a;
}

// Keeps the larger-value side of the two-family cover of the heavy group
// intervals; chosen jobs carry a quarter of their weight.
SegAlloc heavy_alloc(const Seg& s, const std::vector<JobGroup>& groups,
                     const std::vector<int>& heavy) {
  std::vector<std::pair<int, int>> spans;
  spans.reserve(heavy.size());
  for (int gi : heavy) spans.push_back({groups[gi].lo, groups[gi].hi});
  auto [s1, s2] = interval_cover(spans);
  double v1 = 0, v2 = 0;
  for (int i : s1) v1 += groups[heavy[i]].value;
  for (int i : s2) v2 += groups[heavy[i]].value;
  const std::vector<int>& side = v2 > v1 ? s2 : s1;
  SegAlloc a;
  for (int i : side) {
    const JobGroup& g = groups[heavy[i]];
    a.bundles.push_back(SegBundle{g.lo, g.hi, g.jobs});
    for (int j : g.jobs) {
      a.weights.push_back({j, (*s.x)[j] / 4});
      a.value += (*s.val)[j] * (*s.x)[j] / 4;
    }
  }
  add_fillers(a, s.lo, s.hi);
  return a;
}

// Prefix-sum selection over value scales: either the scale crossing a third
// of the dyadic-value mass is large on its own, or the tail past it is.
std::vector<int> light_subset(const Seg& s, const std::vector<int>& jobs, double beta) {
  std::map<int, std::pair<double, std::vector<int>>> by_scale;
  for (int j : jobs) {
    auto& e = by_scale[value_scale_of((*s.val)[j])];
    e.first += (*s.x)[j];
    e.second.push_back(j);
  }
  double total = 0;
  for (auto& [a, e] : by_scale) total += std::ldexp(e.first, a);
  if (total <= 0) return {};
  double prefix = 0, contrib = 0;
  int crossing = 0;
  for (auto& [a, e] : by_scale) {
    prefix += std::ldexp(e.first, a);
    if (prefix > total / 3) {
      crossing = a;
      contrib = std::ldexp(e.first, a);
      break;
    }
  }
  std::vector<int> out;
  if (contrib > total / 3) {
    out = by_scale[crossing].second;
  } else {
    for (auto& [a, e] : by_scale)
      if (a > crossing) out.insert(out.end(), e.second.begin(), e.second.end());
  }
  std::sort(out.begin(), out.end());
  (void)beta;
  return out;
}

// Light side: per-cell subset selection, then windows of scales assembled
// under cells of one candidate top scale. The window width keeps the number
// of sub-cells per top cell at most beta, so carried weight stays at most 1.
SegAlloc light_alloc(const Seg& s, const std::vector<JobGroup>& groups,
                     const std::vector<int>& light, double beta, long long t0, int lmax,
                     int window) {
  std::map<std::pair<int, long long>, std::vector<int>> cells;
  for (int gi : light) {
    const JobGroup& g = groups[gi];
    auto& v = cells[{g.level, g.cell}];
    v.insert(v.end(), g.jobs.begin(), g.jobs.end());
  }
  std::map<std::pair<int, long long>, std::pair<std::vector<int>, double>> picked;
  for (auto& [key, jobs] : cells) {
    std::vector<int> sel = light_subset(s, jobs, beta);
    double v = 0;
    for (int j : sel) v += (*s.val)[j] * (*s.x)[j];
    picked[key] = {std::move(sel), v};
  }
  int best_top = -1;
  double best_v = -1;
  for (int top = window; top - window < lmax; top += window) {
    double v = 0;
    for (auto& [key, pv] : picked)
      if (key.first > top - window && key.first <= top) v += pv.second;
    if (v > best_v) {
      best_v = v;
      best_top = top;
    }
  }
  if (best_top < 0) {
    SegAlloc a;
    add_fillers(a, s.lo, s.hi);
    return a;
  }
  SegAlloc a;
  long long width = 1LL << best_top;
  long long k0 = floor_div(-t0, width);
  long long k1 = floor_div(s.len() - 1 - t0, width);
  for (long long k = k0; k <= k1; ++k) {
    long long cl = t0 + k * width, cr = cl + width - 1;
    SegBundle b{static_cast<int>(std::max(cl, 0LL)) + s.lo,
                static_cast<int>(std::min(cr, static_cast<long long>(s.len()) - 1)) + s.lo,
                {}};
    for (auto& [key, pv] : picked) {
      if (key.first <= best_top - window || key.first > best_top) continue;
      if (floor_div(key.second, 1LL << (best_top - key.first)) != k) continue;
      for (int j : pv.first) {
        b.jobs.push_back(j);
        a.weights.push_back({j, (*s.x)[j]});
        a.value += (*s.val)[j] * (*s.x)[j];
      }
    }
    a.bundles.push_back(std::move(b));
  }
  return a;
}

// Full five-step construction on one segment: low-value filter once, then the
// best of the heavy and light sides over evenly spaced derandomized offsets.
SegAlloc best_seg_alloc(const Seg& s, int max_offsets) {
  if (s.eligible.empty()) return filler_only(s);
  int lmax = ceil_log2_int(s.len()) + 1;
  double beta = compute_beta(std::max(s.len(), 2));
  int window = std::max(1, static_cast<int>(std::floor(std::log2(beta + 1) + 1e-12)));
  std::vector<int> u1 = u1_filter(s);
  if (u1.empty()) return filler_only(s);
  long long span = 1LL << lmax;
  long long offsets = std::min<long long>(span, max_offsets);
  SegAlloc best;
  bool have = false;
  for (long long m = 0; m < offsets; ++m) {
    long long t0 = m * span / offsets;
    std::vector<JobGroup> groups = bucket_core(s, u1, t0, lmax);
    auto [heavy, light] = classify_heavy_light(groups, beta);
    if (!heavy.empty()) {
      SegAlloc cand = heavy_alloc(s, groups, heavy);
      if (!have || cand.value > best.value) {
        best = std::move(cand);
        have = true;
      }
    }
    if (!light.empty()) {
      SegAlloc cand = light_alloc(s, groups, light, beta, t0, lmax, window);
      if (!have || cand.value > best.value) {
        best = std::move(cand);
        have = true;
      }
    }
  }
  if (!have) return filler_only(s);
  return best;
}

// Appends a segment result as bundles over copy index `layer`.
void append_seg(UnitAllocation& ua, const SegAlloc& a, int layer) {
  for (const SegBundle& b : a.bundles) {
    UnitBundle ub;
    ub.copies.reserve(b.hi - b.lo + 1);
    for (int t = b.lo; t <= b.hi; ++t) ub.copies.push_back({t, layer});
    int id = static_cast<int>(ua.bundles.size());
    for (int j : b.jobs) ua.assignment[j] = id;
    ua.bundles.push_back(std::move(ub));
  }
  for (const auto& [j, w] : a.weights) ua.weights[j] = w;
}

// Layer peeling plus per-layer bundling over the runs of surviving items.
// value_for(r) supplies the per-job values the r-th layer is bundled under.
template <class ValueFn>
UnitAllocation layered_core(const Instance& inst, const FractionalAllocation& x,
                            const std::vector<int>& supply, ValueFn&& value_for,
                            int max_offsets) {
  int L = inst.item_count(), n = inst.job_count();
  UnitAllocation ua = empty_allocation(n);
  std::vector<FractionalAllocation> layers = layer_allocation(inst, x);
  // The redefined capacities govern which copies the layers occupy.
  std::vector<int> b0(L, 0);
  for (int t = 0; t < L; ++t) {
    double w = item_frac_weight(inst, x, t);
    int c = w <= kTol ? 0 : static_cast<int>(std::ceil(w - kTol));
    b0[t] = std::min(supply[t], c);
  }
  for (int r = 0; r < static_cast<int>(layers.size()); ++r) {
    std::vector<double> vals = value_for(r);
    std::vector<int> carried;
    for (int j = 0; j < n; ++j)
      if (layers[r][j] > kTol) carried.push_back(j);
    int t = 0;
    while (t < L) {
      if (b0[t] <= r) {
        ++t;
        continue;
      }
      int a = t;
      while (t < L && b0[t] > r) ++t;
      Seg s = make_seg(inst, vals, layers[r], a, t - 1, carried);
      append_seg(ua, best_seg_alloc(s, max_offsets), r);
    }
  }
  // Copies no layer occupies become empty filler bundles, one per run.
  int depth = 0;
  for (int t = 0; t < L; ++t) depth = std::max(depth, supply[t]);
  int covered_layers = static_cast<int>(layers.size());
  for (int r = 0; r < depth; ++r) {
    int t = 0;
    while (t < L) {
      bool gap = r < supply[t] && r >= std::min(b0[t], covered_layers);
      if (!gap) {
        ++t;
        continue;
      }
      UnitBundle ub;
      while (t < L && r < supply[t] && r >= std::min(b0[t], covered_layers)) {
        ub.copies.push_back({t, r});
        ++t;
      }
      ua.bundles.push_back(std::move(ub));
    }
  }
  return ua;
}

}  // namespace

double unit_allocation_value(const Instance& inst, const UnitAllocation& ua) {
  return unit_allocation_value(inst, ua, natural_values(inst));
}

double unit_allocation_value(const Instance& inst, const UnitAllocation& ua,
                             const std::vector<double>& values) {
  double v = 0;
  for (int j = 0; j < inst.job_count(); ++j) v += values[j] * ua.weights[j];
  return v;
}

ValidationReport validate_unit_allocation(const Instance& inst, const UnitAllocation& ua) {
  ValidationReport rep;
  int L = inst.item_count(), n = inst.job_count();
  if (static_cast<int>(ua.assignment.size()) != n) rep.problems.push_back("assignment size mismatch");
  if (ua.weights.size() != n) rep.problems.push_back("weights size mismatch");
  if (!rep.ok()) return rep;
  std::vector<std::vector<char>> seen(L);
  for (int t = 0; t < L; ++t) seen[t].assign(inst.items[t].capacity, 0);
  for (int k = 0; k < static_cast<int>(ua.bundles.size()); ++k) {
    for (const auto& [t, r] : ua.bundles[k].copies) {
      if (t < 0 || t >= L || r < 0 || r >= inst.items[t].capacity) {
        rep.problems.push_back("bundle " + std::to_string(k) + " holds a copy outside supply");
        continue;
      }
      if (seen[t][r])
        rep.problems.push_back("item " + std::to_string(t) + " copy " + std::to_string(r) +
                               " appears twice");
      seen[t][r] = 1;
    }
  }
  for (int t = 0; t < L; ++t)
    for (int r = 0; r < inst.items[t].capacity; ++r)
      if (!seen[t][r])
        rep.problems.push_back("item " + std::to_string(t) + " copy " + std::to_string(r) +
                               " missing from every bundle");
  std::vector<double> load(ua.bundles.size(), 0.0);
  for (int j = 0; j < n; ++j) {
    int k = ua.assignment[j];
    if (k < 0) {
      if (ua.weights[j] > kTol)
        rep.problems.push_back("job " + std::to_string(j) + " carries weight while dropped");
      continue;
    }
    if (k >= static_cast<int>(ua.bundles.size())) {
      rep.problems.push_back("job " + std::to_string(j) + " assigned to a missing bundle");
      continue;
    }
    if (ua.weights[j] < -kTol)
      rep.problems.push_back("job " + std::to_string(j) + " has negative weight");
    std::vector<char> mask(L, 0);
    for (const auto& [t, r] : ua.bundles[k].copies)
      if (t >= 0 && t < L) mask[t] = 1;
    for (int t : job_items(inst.jobs[j]))
      if (!mask[t]) {
        rep.problems.push_back("job " + std::to_string(j) + " leaves bundle " + std::to_string(k));
        break;
      }
    load[k] += ua.weights[j];
  }
  for (int k = 0; k < static_cast<int>(ua.bundles.size()); ++k)
    if (load[k] > 1 + kTol)
      rep.problems.push_back("bundle " + std::to_string(k) + " carries weight above 1");
  return rep;
}

double compute_beta(int length) {
  if (length < 2) fail(ErrorKind::invalid_input, "length scale must be at least 2");
  double target = std::log2(static_cast<double>(length));
  if (target <= 2) return 2.0;
  double lo = 2.0, hi = target;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (mid * std::log2(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<int> filter_low_value(const Instance& inst, const FractionalAllocation& x) {
  require_line(inst, x);
  std::vector<double> vals = natural_values(inst);
  std::vector<int> all(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) all[j] = j;
  Seg s = make_seg(inst, vals, x, 0, inst.item_count() - 1, all);
  return u1_filter(s);
}

std::vector<JobGroup> bucket_jobs(const Instance& inst, const FractionalAllocation& x,
                                  const std::vector<int>& u1, long long t0) {
  require_line(inst, x);
  std::vector<double> vals = natural_values(inst);
  Seg s = make_seg(inst, vals, x, 0, inst.item_count() - 1, u1);
  return bucket_core(s, s.eligible, t0, ceil_log2_int(inst.item_count()) + 1);
}

std::pair<std::vector<int>, std::vector<int>> classify_heavy_light(
    const std::vector<JobGroup>& groups, double beta) {
  std::vector<int> heavy, light;
  double threshold = 1.0 / (6.0 * beta);
  for (int i = 0; i < static_cast<int>(groups.size()); ++i)
    (groups[i].weight >= threshold ? heavy : light).push_back(i);
  return {heavy, light};
}

std::pair<std::vector<int>, std::vector<int>> interval_cover(
    const std::vector<std::pair<int, int>>& intervals) {
  int n = static_cast<int>(intervals.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tie(intervals[a].first, intervals[b].second, a) <
           std::tie(intervals[b].first, intervals[a].second, b);
  });
  std::vector<int> s1, s2;
  long long covered = LLONG_MIN, end1 = LLONG_MIN, end2 = LLONG_MIN;
  int i = 0;
  while (i < n) {
    long long p = intervals[order[i]].first;
    if (covered != LLONG_MIN && covered + 1 > p) p = covered + 1;
    int choose = -1;
    while (i < n && intervals[order[i]].first <= p) {
      if (choose < 0 || intervals[order[i]].second > intervals[choose].second) choose = order[i];
      ++i;
    }
    if (covered != LLONG_MIN && intervals[choose].second <= covered) continue;
    // The pick can overlap only the immediately preceding pick, so one of the
    // two families always accepts it disjointly.
    if (end1 == LLONG_MIN || intervals[choose].first > end1) {
      s1.push_back(choose);
      end1 = intervals[choose].second;
    } else {
      if (end2 != LLONG_MIN && intervals[choose].first <= end2)
        fail(ErrorKind::numerical, "interval cover lost disjointness");
      s2.push_back(choose);
      end2 = intervals[choose].second;
    }
    covered = intervals[choose].second;
  }
  return {s1, s2};
}

UnitAllocation build_heavy_unit_allocation(const Instance& inst, const FractionalAllocation& x,
                                           const std::vector<JobGroup>& groups,
                                           const std::vector<int>& heavy) {
  require_line(inst, x);
  require_unit(inst);
  std::vector<double> vals = natural_values(inst);
  std::vector<int> all(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) all[j] = j;
  Seg s = make_seg(inst, vals, x, 0, inst.item_count() - 1, all);
  UnitAllocation ua = empty_allocation(inst.job_count());
  append_seg(ua, heavy_alloc(s, groups, heavy), 0);
  return ua;
}

std::vector<int> select_light_subset(const Instance& inst, const FractionalAllocation& x,
                                     const std::vector<int>& cell_jobs, double beta) {
  require_line(inst, x);
  std::vector<double> vals = natural_values(inst);
  Seg s = make_seg(inst, vals, x, 0, inst.item_count() - 1, cell_jobs);
  return light_subset(s, cell_jobs, beta);
}

UnitAllocation build_light_unit_allocation(const Instance& inst, const FractionalAllocation& x,
                                           const std::vector<JobGroup>& groups,
                                           const std::vector<int>& light, double beta,
                                           long long t0) {
  require_line(inst, x);
  require_unit(inst);
  std::vector<double> vals = natural_values(inst);
  std::vector<int> all(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) all[j] = j;
  Seg s = make_seg(inst, vals, x, 0, inst.item_count() - 1, all);
  int lmax = ceil_log2_int(inst.item_count()) + 1;
  int window = std::max(1, static_cast<int>(std::floor(std::log2(beta + 1) + 1e-12)));
  UnitAllocation ua = empty_allocation(inst.job_count());
  append_seg(ua, light_alloc(s, groups, light, beta, t0, lmax, window), 0);
  return ua;
}

UnitAllocation build_unit_allocation(const Instance& inst, const FractionalAllocation& x,
                                     int max_offsets) {
  require_line(inst, x);
  require_unit(inst);
  require_offsets(max_offsets);
  std::vector<double> vals = natural_values(inst);
  std::vector<int> all(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) all[j] = j;
  Seg s = make_seg(inst, vals, x, 0, inst.item_count() - 1, all);
  UnitAllocation ua = empty_allocation(inst.job_count());
  append_seg(ua, best_seg_alloc(s, max_offsets), 0);
  return ua;
}

std::vector<int> greedy_layer(const Instance& inst, const FractionalAllocation& x,
                              const std::vector<int>& capacities) {
  require_line(inst, x);
  if (static_cast<int>(capacities.size()) != inst.item_count())
    fail(ErrorKind::invalid_input, "capacity vector size mismatch");
  int L = inst.item_count(), n = inst.job_count();
  std::vector<double> covered(L, 0.0);
  std::vector<char> in(n, 0);
  std::vector<int> out;
  for (;;) {
    int pick = -1;
    for (int t = 0; t < L && pick == -1; ++t) {
      if (capacities[t] < 1) continue;
      if (covered[t] >= std::min(1.0, static_cast<double>(capacities[t])) - kTol) continue;
      for (int j = 0; j < n; ++j) {
        if (in[j] || x[j] <= kTol) continue;
        const IntervalBundle& b = line_span(inst.jobs[j]);
        if (b.first > t || b.last < t) continue;
        if (pick == -1 || b.last > line_span(inst.jobs[pick]).last) pick = j;
      }
      // No remaining job covers t: every job there is already selected.
    }
    if (pick == -1) break;
    in[pick] = 1;
    out.push_back(pick);
    const IntervalBundle& b = line_span(inst.jobs[pick]);
    for (int t = b.first; t <= b.last; ++t) covered[t] += x[pick];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FractionalAllocation> layer_allocation(const Instance& inst,
                                                   const FractionalAllocation& x) {
  require_line(inst, x);
  int L = inst.item_count(), n = inst.job_count();
  auto caps_of = [&](const FractionalAllocation& r) {
    std::vector<int> c(L, 0);
    for (int t = 0; t < L; ++t) {
      double w = item_frac_weight(inst, r, t);
      c[t] = w <= kTol ? 0 : static_cast<int>(std::ceil(w - kTol));
    }
    return c;
  };
  FractionalAllocation residual = x;
  std::vector<FractionalAllocation> layers;
  std::vector<int> caps = caps_of(residual);
  while (*std::max_element(caps.begin(), caps.end()) > 4) {
    std::vector<int> sel = greedy_layer(inst, residual, caps);
    if (sel.empty()) break;
    FractionalAllocation layer(n);
    for (int j : sel) {
      layer[j] = residual[j] / 4;
      residual[j] = 0;
    }
    layers.push_back(std::move(layer));
    caps = caps_of(residual);
  }
  bool any = false;
  for (int j = 0; j < n; ++j) any = any || residual[j] > kTol;
  if (any || layers.empty()) {
    FractionalAllocation base(n);
    for (int j = 0; j < n; ++j) base[j] = residual[j] / 4;
    layers.push_back(std::move(base));
  }
  return layers;
}

std::vector<MarketSegment> large_market_split(const Instance& inst,
                                              const FractionalAllocation& x) {
  require_line(inst, x);
  int L = inst.item_count(), n = inst.job_count();
  int B = min_capacity(inst);
  std::vector<MarketSegment> out;
  if (B < 2) {
    MarketSegment seg;
    seg.jobs.resize(n);
    for (int j = 0; j < n; ++j) seg.jobs[j] = j;
    seg.allocation = x;
    seg.capacities.resize(L);
    for (int t = 0; t < L; ++t) seg.capacities[t] = inst.items[t].capacity;
    seg.copy_offset.assign(L, 0);
    out.push_back(std::move(seg));
    return out;
  }
  double logL = std::log2(static_cast<double>(L));
  int k = std::max(1, static_cast<int>(std::floor(
                          0.5 * std::min(static_cast<double>(B), logL) + 1e-12)));
  auto band_of = [&](int len) {
    if (L <= 1 || len <= 1) return 1;
    int b = static_cast<int>(std::ceil(k * std::log2(static_cast<double>(len)) / logL - 1e-9));
    return std::clamp(b, 1, k);
  };
  for (int i = 1; i <= k; ++i) {
    MarketSegment seg;
    seg.copy_offset.assign(L, 0);
    seg.capacities.assign(L, 0);
    FractionalAllocation half(n);
    for (int j = 0; j < n; ++j)
      if (band_of(job_length(inst.jobs[j])) == i) {
        seg.jobs.push_back(j);
        half[j] = x[j] / 2;
      }
    for (int t = 0; t < L; ++t) {
      double w = item_frac_weight(inst, half, t);
      seg.capacities[t] = w <= kTol ? 0 : static_cast<int>(std::ceil(w - kTol));
    }
    seg.allocation = std::move(half);
    out.push_back(std::move(seg));
  }
  std::vector<int> used(L, 0);
  for (MarketSegment& seg : out)
    for (int t = 0; t < L; ++t) {
      seg.copy_offset[t] = used[t];
      used[t] += seg.capacities[t];
    }
  for (int t = 0; t < L; ++t)
    if (used[t] > inst.items[t].capacity)
      fail(ErrorKind::numerical, "band supply exceeds item capacity");
  return out;
}

UnitAllocation build_layered_unit_allocation(const Instance& inst,
                                             const FractionalAllocation& x, int max_offsets) {
  require_line(inst, x);
  require_offsets(max_offsets);
  std::vector<int> supply(inst.item_count());
  for (int t = 0; t < inst.item_count(); ++t) supply[t] = inst.items[t].capacity;
  std::vector<double> vals = natural_values(inst);
  return layered_core(inst, x, supply, [&](int) { return vals; }, max_offsets);
}

UnitAllocation build_large_market_allocation(const Instance& inst,
                                             const FractionalAllocation& x, int max_offsets) {
  require_line(inst, x);
  require_offsets(max_offsets);
  int L = inst.item_count(), n = inst.job_count();
  std::vector<MarketSegment> segs = large_market_split(inst, x);
  std::vector<double> vals = natural_values(inst);
  UnitAllocation ua = empty_allocation(n);
  for (const MarketSegment& seg : segs) {
    UnitAllocation part = layered_core(inst, seg.allocation, seg.capacities,
                                       [&](int) { return vals; }, max_offsets);
    int base = static_cast<int>(ua.bundles.size());
    for (const UnitBundle& b : part.bundles) {
      UnitBundle nb;
      nb.copies.reserve(b.copies.size());
      for (const auto& [t, r] : b.copies) nb.copies.push_back({t, seg.copy_offset[t] + r});
      ua.bundles.push_back(std::move(nb));
    }
    for (int j = 0; j < n; ++j)
      if (part.assignment[j] >= 0) {
        ua.assignment[j] = base + part.assignment[j];
        ua.weights[j] = part.weights[j];
      }
  }
  // Copies above the carved band supply become empty filler bundles.
  std::vector<int> used(L, 0);
  int depth = 0;
  for (const MarketSegment& seg : segs)
    for (int t = 0; t < L; ++t) used[t] += seg.capacities[t];
  for (int t = 0; t < L; ++t) depth = std::max(depth, inst.items[t].capacity);
  for (int r = 0; r < depth; ++r) {
    int t = 0;
    while (t < L) {
      if (!(r >= used[t] && r < inst.items[t].capacity)) {
        ++t;
        continue;
      }
      UnitBundle ub;
      while (t < L && r >= used[t] && r < inst.items[t].capacity) {
        ub.copies.push_back({t, r});
        ++t;
      }
      ua.bundles.push_back(std::move(ub));
    }
  }
  return ua;
}

CostAwareUnit unit_allocation_with_costs(const Instance& inst, const FractionalAllocation& x,
                                         int max_offsets) {
  require_line(inst, x);
  require_offsets(max_offsets);
  int L = inst.item_count(), n = inst.job_count();
  std::vector<int> supply(L);
  for (int t = 0; t < L; ++t) supply[t] = inst.items[t].capacity;
  auto shifted = [&](int r) {
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) {
      const IntervalBundle& b = line_span(inst.jobs[j]);
      double c = 0;
      for (int t = b.first; t <= b.last; ++t) {
        const std::vector<double>& costs = inst.items[t].costs;
        if (!costs.empty()) c += costs[std::min<std::size_t>(r, costs.size() - 1)];
      }
      v[j] = inst.jobs[j].value - c;
    }
    return v;
  };
  CostAwareUnit out;
  out.alloc = layered_core(inst, x, supply, shifted, max_offsets);
  out.shifted_values.assign(n, 0.0);
  std::map<int, std::vector<double>> cache;
  for (int j = 0; j < n; ++j) {
    int k = out.alloc.assignment[j];
    if (k < 0 || out.alloc.bundles[k].copies.empty()) continue;
    int r = out.alloc.bundles[k].copies.front().second;
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, shifted(r)).first;
    out.shifted_values[j] = it->second[j];
  }
  return out;
}

}  // namespace pm
