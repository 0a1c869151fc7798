#include "actsim/partition.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace actsim {

namespace {

bool evaluated(const RtlNode& n) { return n.alive && n.expr != nullptr; }

// Union-find over node ids.
struct UnionFind {
  std::vector<uint32_t> parent, size;
  explicit UnionFind(size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void merge(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);  // keep the smaller id as root
    parent[b] = a;
    size[a] += size[b];
  }
};

// Edges between evaluated nodes only (activation edges inside the cycle).
struct EvalGraph {
  std::vector<uint32_t> nodes;  // evaluated node ids in graph topo order
  std::vector<std::vector<uint32_t>> succs, preds;  // by node id, evaluated only
  std::vector<std::vector<uint32_t>> full_preds;    // includes sources

  static EvalGraph build(const RtlGraph& g) {
    EvalGraph eg;
    Adjacency adj = g.build_adjacency();
    eg.succs.resize(g.nodes.size());
    eg.preds.resize(g.nodes.size());
    eg.full_preds.resize(g.nodes.size());
    for (uint32_t id : g.topo_order())
      if (evaluated(g.node(id))) eg.nodes.push_back(id);
    for (const auto& n : g.nodes) {
      if (!evaluated(n)) continue;
      for (uint32_t p : adj.preds[n.id]) {
        eg.full_preds[n.id].push_back(p);
        if (evaluated(g.node(p))) {
          eg.preds[n.id].push_back(p);
          eg.succs[p].push_back(n.id);
        }
      }
    }
    return eg;
  }
};

// Contracted-group adjacency maintained during pre-grouping.
struct GroupView {
  GroupView(UnionFind& u, const EvalGraph& e) : uf(u), eg(e) {}
  UnionFind& uf;
  const EvalGraph& eg;

  std::set<uint32_t> group_succs(uint32_t root) {
    std::set<uint32_t> out;
    for (uint32_t n : members(root))
      for (uint32_t s : eg.succs[n]) {
        uint32_t r = uf.find(s);
        if (r != root) out.insert(r);
      }
    return out;
  }
  std::set<uint32_t> group_preds(uint32_t root) {
    std::set<uint32_t> out;
    for (uint32_t n : members(root))
      for (uint32_t p : eg.preds[n]) {
        uint32_t r = uf.find(p);
        if (r != root) out.insert(r);
      }
    return out;
  }
  const std::vector<uint32_t>& members(uint32_t root) {
    cache_.clear();
    for (uint32_t n : eg.nodes)
      if (uf.find(n) == root) cache_.push_back(n);
    return cache_;
  }

private:
  std::vector<uint32_t> cache_;
};

// Would fusing groups a and b (with some edge between them) close a cycle?
// True iff a path connects them through at least one other group.
bool fusion_creates_cycle(GroupView& gv, uint32_t a, uint32_t b) {
  // BFS over contracted succs from a, ignoring direct hops into b on the
  // first step; if b is reachable through an intermediate, fusing cycles.
  std::set<uint32_t> visited{a};
  std::vector<uint32_t> frontier;
  for (uint32_t s : gv.group_succs(a))
    if (s != b) frontier.push_back(s);
  // Also paths b -> ... -> a would be a cycle already (edge a->b exists in a
  // DAG, so they cannot); only forward paths matter.
  while (!frontier.empty()) {
    uint32_t cur = frontier.back();
    frontier.pop_back();
    if (cur == b) return true;
    if (!visited.insert(cur).second) continue;
    for (uint32_t s : gv.group_succs(cur)) frontier.push_back(s);
  }
  return false;
}

bool fusion_creates_cycle_undirected(GroupView& gv, UnionFind& uf, uint32_t a,
                                     uint32_t b) {
  // For sibling fusion there may be no direct edge; fusing a,b cycles iff a
  // path exists between them in either direction through other groups.
  uint32_t ra = uf.find(a), rb = uf.find(b);
  std::set<uint32_t> visited;
  std::vector<uint32_t> frontier{ra};
  while (!frontier.empty()) {
    uint32_t cur = frontier.back();
    frontier.pop_back();
    if (!visited.insert(cur).second) continue;
    for (uint32_t s : gv.group_succs(cur)) {
      if (s == rb) return true;
      frontier.push_back(s);
    }
  }
  visited.clear();
  frontier = {rb};
  while (!frontier.empty()) {
    uint32_t cur = frontier.back();
    frontier.pop_back();
    if (!visited.insert(cur).second) continue;
    for (uint32_t s : gv.group_succs(cur)) {
      if (s == ra) return true;
      frontier.push_back(s);
    }
  }
  return false;
}

std::vector<PreGroup> collect_groups(const EvalGraph& eg, UnionFind& uf,
                                     const std::map<uint32_t, PreGroup::Reason>& reasons) {
  std::map<uint32_t, PreGroup> by_root;
  for (uint32_t n : eg.nodes) {  // topo order keeps members topo-sorted
    uint32_t r = uf.find(n);
    auto& grp = by_root[r];
    grp.members.push_back(n);
    auto it = reasons.find(r);
    grp.reason = it == reasons.end() ? PreGroup::Reason::Singleton : it->second;
  }
  std::vector<PreGroup> out;
  out.reserve(by_root.size());
  for (auto& [root, grp] : by_root) out.push_back(std::move(grp));
  return out;
}

}  // namespace

std::vector<PreGroup> singleton_groups(const RtlGraph& g) {
  EvalGraph eg = EvalGraph::build(g);
  std::vector<PreGroup> out;
  out.reserve(eg.nodes.size());
  for (uint32_t n : eg.nodes) {
    PreGroup grp;
    grp.members = {n};
    out.push_back(std::move(grp));
  }
  return out;
}

std::vector<PreGroup> pre_group(const RtlGraph& g, uint32_t max_size) {
  EvalGraph eg = EvalGraph::build(g);
  UnionFind uf(g.nodes.size());
  GroupView gv(uf, eg);
  std::map<uint32_t, PreGroup::Reason> reasons;

  auto try_fuse = [&](uint32_t a, uint32_t b, PreGroup::Reason why, bool direct) {
    uint32_t ra = uf.find(a), rb = uf.find(b);
    if (ra == rb) return;
    if (uf.size[ra] + uf.size[rb] > max_size) return;
    bool cycles = direct ? fusion_creates_cycle(gv, ra, rb)
                         : fusion_creates_cycle_undirected(gv, uf, ra, rb);
    if (cycles) return;
    uf.merge(ra, rb);
    uint32_t root = uf.find(ra);
    if (!reasons.count(root)) reasons[root] = why;
  };

  // Rule 1: out-degree-1 nodes go with their successor.
  for (uint32_t n : eg.nodes) {
    uint32_t root = uf.find(n);
    auto succs = gv.group_succs(root);
    if (succs.size() == 1)
      try_fuse(root, *succs.begin(), PreGroup::Reason::OutDegreeOne, true);
  }
  // Rule 2: in-degree-1 nodes go with their predecessor.
  for (uint32_t n : eg.nodes) {
    uint32_t root = uf.find(n);
    auto preds = gv.group_preds(root);
    if (preds.size() == 1)
      try_fuse(*preds.begin(), root, PreGroup::Reason::InDegreeOne, true);
  }
  // Rule 3: siblings sharing the exact predecessor set (sources included).
  {
    std::map<std::vector<uint32_t>, std::vector<uint32_t>> by_preds;
    for (uint32_t n : eg.nodes) {
      std::vector<uint32_t> key = eg.full_preds[n];
      if (key.empty()) continue;
      by_preds[std::move(key)].push_back(n);
    }
    for (auto& [key, sibs] : by_preds) {
      for (size_t i = 1; i < sibs.size(); i++)
        try_fuse(sibs[0], sibs[i], PreGroup::Reason::Siblings, false);
    }
  }
  return collect_groups(eg, uf, reasons);
}

namespace {

// Unit-level (pre-group) weighted adjacency for refinement.
struct UnitGraph {
  size_t n = 0;
  std::vector<std::map<uint32_t, uint32_t>> out, in;  // unit -> unit -> weight
  std::vector<uint32_t> size;                          // member count
  std::vector<uint32_t> topo;                          // unit order

  static UnitGraph build(const std::vector<PreGroup>& groups, const EvalGraph& eg) {
    UnitGraph ug;
    ug.n = groups.size();
    ug.out.resize(ug.n);
    ug.in.resize(ug.n);
    ug.size.resize(ug.n);
    std::vector<uint32_t> unit_of(eg.succs.size(), kNoNode);
    for (uint32_t u = 0; u < groups.size(); u++) {
      ug.size[u] = (uint32_t)groups[u].members.size();
      for (uint32_t m : groups[u].members) unit_of[m] = u;
    }
    for (uint32_t n_id : eg.nodes) {
      for (uint32_t s : eg.succs[n_id]) {
        uint32_t a = unit_of[n_id], b = unit_of[s];
        if (a == b || a == kNoNode || b == kNoNode) continue;
        ug.out[a][b]++;
        ug.in[b][a]++;
      }
    }
    // Kahn over units, smallest first-member id first.
    std::vector<uint32_t> indeg(ug.n, 0);
    for (uint32_t u = 0; u < ug.n; u++) indeg[u] = (uint32_t)ug.in[u].size();
    auto key = [&](uint32_t u) {
      return groups[u].members.empty() ? kNoNode : groups[u].members[0];
    };
    auto cmp = [&](uint32_t a, uint32_t b) { return key(a) > key(b); };
    std::priority_queue<uint32_t, std::vector<uint32_t>, decltype(cmp)> ready(cmp);
    for (uint32_t u = 0; u < ug.n; u++)
      if (indeg[u] == 0) ready.push(u);
    std::vector<uint32_t> remaining = indeg;
    while (!ready.empty()) {
      uint32_t u = ready.top();
      ready.pop();
      ug.topo.push_back(u);
      for (const auto& [v, w] : ug.out[u])
        if (--remaining[v] == 0) ready.push(v);
    }
    assert(ug.topo.size() == ug.n && "pre-groups must form a DAG");
    return ug;
  }
};

struct Assignment {
  std::vector<uint32_t> super_of_unit;
  std::vector<std::set<uint32_t>> units_in;  // supernode -> units
  std::vector<uint32_t> sizes;

  uint64_t cut(const UnitGraph& ug) const {
    uint64_t c = 0;
    for (uint32_t u = 0; u < ug.n; u++)
      for (const auto& [v, w] : ug.out[u])
        if (super_of_unit[u] != super_of_unit[v]) c += w;
    return c;
  }
};

bool supernode_dag_acyclic(const UnitGraph& ug, const Assignment& a) {
  size_t s = a.units_in.size();
  std::vector<std::set<uint32_t>> sadj(s);
  std::vector<uint32_t> indeg(s, 0);
  for (uint32_t u = 0; u < ug.n; u++)
    for (const auto& [v, w] : ug.out[u]) {
      uint32_t x = a.super_of_unit[u], y = a.super_of_unit[v];
      if (x != y && sadj[x].insert(y).second) indeg[y]++;
    }
  std::vector<uint32_t> work;
  for (uint32_t i = 0; i < s; i++)
    if (indeg[i] == 0) work.push_back(i);
  size_t seen = 0;
  while (!work.empty()) {
    uint32_t x = work.back();
    work.pop_back();
    seen++;
    for (uint32_t y : sadj[x])
      if (--indeg[y] == 0) work.push_back(y);
  }
  return seen == s;
}

SupernodePlan finalize(const RtlGraph& g, const std::vector<PreGroup>& groups,
                       const UnitGraph& ug, const Assignment& a) {
  // Renumber supernodes in contracted-DAG topological order.
  size_t s = a.units_in.size();
  std::vector<std::set<uint32_t>> sadj(s);
  std::vector<uint32_t> indeg(s, 0);
  for (uint32_t u = 0; u < ug.n; u++)
    for (const auto& [v, w] : ug.out[u]) {
      uint32_t x = a.super_of_unit[u], y = a.super_of_unit[v];
      if (x != y && sadj[x].insert(y).second) indeg[y]++;
    }
  auto first_member = [&](uint32_t sn) -> uint32_t {
    uint32_t best = kNoNode;
    for (uint32_t u : a.units_in[sn])
      for (uint32_t m : groups[u].members) best = std::min(best, m);
    return best;
  };
  auto cmp = [&](uint32_t x, uint32_t y) { return first_member(x) > first_member(y); };
  std::priority_queue<uint32_t, std::vector<uint32_t>, decltype(cmp)> ready(cmp);
  for (uint32_t i = 0; i < s; i++)
    if (indeg[i] == 0 && !a.units_in[i].empty()) ready.push(i);
  std::vector<uint32_t> renumber(s, kNoNode);
  uint32_t next_id = 0;
  std::vector<uint32_t> order;
  while (!ready.empty()) {
    uint32_t x = ready.top();
    ready.pop();
    renumber[x] = next_id++;
    order.push_back(x);
    for (uint32_t y : sadj[x])
      if (--indeg[y] == 0 && !a.units_in[y].empty()) ready.push(y);
  }

  SupernodePlan plan;
  plan.supernode_of.assign(g.nodes.size(), kNoNode);
  plan.members.resize(next_id);
  plan.succs.resize(next_id);
  // Intra-supernode member order follows the graph topological order.
  std::vector<uint32_t> topo_pos(g.nodes.size(), 0);
  {
    auto order_nodes = g.topo_order();
    for (uint32_t i = 0; i < order_nodes.size(); i++) topo_pos[order_nodes[i]] = i;
  }
  for (uint32_t old_id = 0; old_id < s; old_id++) {
    if (renumber[old_id] == kNoNode) continue;
    uint32_t sn = renumber[old_id];
    for (uint32_t u : a.units_in[old_id])
      for (uint32_t m : groups[u].members) {
        plan.supernode_of[m] = sn;
        plan.members[sn].push_back(m);
      }
    std::sort(plan.members[sn].begin(), plan.members[sn].end(),
              [&](uint32_t x, uint32_t y) { return topo_pos[x] < topo_pos[y]; });
  }
  for (uint32_t u = 0; u < ug.n; u++)
    for (const auto& [v, w] : ug.out[u]) {
      uint32_t x = a.super_of_unit[u], y = a.super_of_unit[v];
      if (x == y) continue;
      plan.succs[renumber[x]].push_back(renumber[y]);
      plan.cut_size += w;
    }
  for (auto& v : plan.succs) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  plan.active_words = (next_id + 63) / 64;
  return plan;
}

}  // namespace

SupernodePlan kernighan_refine(const RtlGraph& g, const std::vector<PreGroup>& groups,
                               uint32_t max_size, int pass_limit) {
  EvalGraph eg = EvalGraph::build(g);
  UnitGraph ug = UnitGraph::build(groups, eg);

  // Initial assignment: pack consecutive units of the topological order.
  // Interval blocks of a topo order keep the contracted DAG acyclic.
  Assignment a;
  a.super_of_unit.resize(ug.n, 0);
  uint32_t cur = 0, cur_fill = 0;
  bool any = false;
  for (uint32_t u : ug.topo) {
    if (any && cur_fill + ug.size[u] > max_size) {
      cur++;
      cur_fill = 0;
    }
    a.super_of_unit[u] = cur;
    cur_fill += ug.size[u];
    any = true;
  }
  size_t sn_count = any ? cur + 1 : 0;
  a.units_in.resize(sn_count);
  a.sizes.resize(sn_count, 0);
  for (uint32_t u = 0; u < ug.n; u++) {
    a.units_in[a.super_of_unit[u]].insert(u);
    a.sizes[a.super_of_unit[u]] += ug.size[u];
  }

  // Positive-gain moves of whole units into adjacent supernodes.
  for (int pass = 0; pass < pass_limit; pass++) {
    size_t moves = 0;
    for (uint32_t u = 0; u < ug.n; u++) {
      uint32_t from = a.super_of_unit[u];
      // Edge weight from u into each adjacent supernode.
      std::map<uint32_t, uint64_t> toward;
      uint64_t to_home = 0;
      for (const auto& [v, w] : ug.out[u]) {
        uint32_t sv = a.super_of_unit[v];
        if (sv == from)
          to_home += w;
        else
          toward[sv] += w;
      }
      for (const auto& [v, w] : ug.in[u]) {
        uint32_t sv = a.super_of_unit[v];
        if (sv == from)
          to_home += w;
        else
          toward[sv] += w;
      }
      uint32_t best_target = kNoNode;
      int64_t best_gain = 0;
      for (const auto& [target, w] : toward) {
        int64_t gain = (int64_t)w - (int64_t)to_home;
        if (gain <= 0) continue;
        if (a.sizes[target] + ug.size[u] > max_size) continue;
        if (gain > best_gain) {
          best_gain = gain;
          best_target = target;
        }
      }
      if (best_target == kNoNode) continue;
      // Tentatively apply and verify the supernode DAG stays acyclic.
      a.units_in[from].erase(u);
      a.sizes[from] -= ug.size[u];
      a.super_of_unit[u] = best_target;
      a.units_in[best_target].insert(u);
      a.sizes[best_target] += ug.size[u];
      if (!supernode_dag_acyclic(ug, a)) {
        a.units_in[best_target].erase(u);
        a.sizes[best_target] -= ug.size[u];
        a.super_of_unit[u] = from;
        a.units_in[from].insert(u);
        a.sizes[from] += ug.size[u];
        continue;
      }
      moves++;
    }
    if (moves == 0) break;
  }
  return finalize(g, groups, ug, a);
}

SupernodePlan groups_as_plan(const RtlGraph& g, const std::vector<PreGroup>& groups) {
  EvalGraph eg = EvalGraph::build(g);
  UnitGraph ug = UnitGraph::build(groups, eg);
  Assignment a;
  a.super_of_unit.resize(ug.n);
  a.units_in.resize(ug.n);
  a.sizes.resize(ug.n, 0);
  for (uint32_t u = 0; u < ug.n; u++) {
    a.super_of_unit[u] = u;
    a.units_in[u].insert(u);
    a.sizes[u] = ug.size[u];
  }
  return finalize(g, groups, ug, a);
}

}  // namespace actsim
