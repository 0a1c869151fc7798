#include "actsim/bit_split.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace actsim {

namespace {

ExprRef as_uint(ExprRef e) {
  if (!e->sign) return e;
  return mk_op(Op::AsUInt, {std::move(e)});
}

// Slice of `child` viewed as zero/sign-extended to `padded_width`.
ExprRef slice_padded(const ExprRef& child, uint32_t padded_width, uint32_t hi,
                     uint32_t lo);

}  // namespace

ExprRef slice_expr(const ExprRef& e, uint32_t hi, uint32_t lo) {
  assert(hi >= lo && hi < e->width);
  if (lo == 0 && hi == e->width - 1) return as_uint(e);  // whole value
  switch (e->op) {
    case Op::Const: {
      WideValue v = wv_extract(e->cval, hi, lo);
      return mk_const(std::move(v), false);
    }
    case Op::Ref:
      return mk_bits(e, hi, lo);
    case Op::Bits:
      return slice_expr(e->children[0], e->arg1 + hi, e->arg1 + lo);
    case Op::Cat: {
      const ExprRef& hi_part = e->children[0];
      const ExprRef& lo_part = e->children[1];
      uint32_t lw = lo_part->width;
      if (hi < lw) return slice_expr(lo_part, hi, lo);
      if (lo >= lw) return slice_expr(hi_part, hi - lw, lo - lw);
      ExprRef upper = slice_expr(hi_part, hi - lw, 0);
      ExprRef lower = slice_expr(lo_part, lw - 1, lo);
      if (!upper || !lower) return nullptr;
      return mk_cat(std::move(upper), std::move(lower));
    }
    case Op::Pad:
      return slice_padded(e->children[0], e->width, hi, lo);
    case Op::Mux: {
      ExprRef a = slice_padded(e->children[1], e->width, hi, lo);
      ExprRef b = slice_padded(e->children[2], e->width, hi, lo);
      if (!a || !b) return nullptr;
      return mk_mux(e->children[0], std::move(a), std::move(b));
    }
    case Op::AsUInt:
    case Op::AsSInt:
      return slice_expr(e->children[0], hi, lo);
    default:
      return nullptr;  // value-mixing operator: only whole-value access
  }
}

namespace {

ExprRef slice_padded(const ExprRef& child, uint32_t padded_width, uint32_t hi,
                     uint32_t lo) {
  uint32_t cw = child->width;
  if (cw == padded_width || hi < cw) return slice_expr(child, hi, lo);
  if (child->sign) return nullptr;  // sign replication mixes the top bits
  if (lo >= cw) return mk_const(WideValue(hi - lo + 1), false);
  ExprRef low = slice_expr(child, cw - 1, lo);
  if (!low) return nullptr;
  return mk_cat(mk_const(WideValue(hi - cw + 1), false), std::move(low));
}

bool splittable_kind(const RtlNode& n) {
  return n.kind == NodeKind::Wire || n.kind == NodeKind::RegisterRead;
}

// The expression that defines a node's bits (the paired write expression for
// a register read node).
const ExprRef& defining_expr(const RtlGraph& g, uint32_t id) {
  const RtlNode& n = g.node(id);
  if (n.kind == NodeKind::RegisterRead) return g.node(n.pair).expr;
  return n.expr;
}

// Walks an expression reporting each use of a node: Bits directly over a Ref
// is a ranged use, any other Ref is a whole-value use.
void scan_uses(const Expr& e,
               const std::function<void(uint32_t, uint32_t, uint32_t)>& use) {
  if (e.op == Op::Bits && e.children[0]->op == Op::Ref) {
    const Expr& r = *e.children[0];
    use(r.node, e.arg0, e.arg1);
    return;
  }
  if (e.op == Op::Ref) {
    use(e.node, e.width - 1, 0);
    return;
  }
  for (const auto& c : e.children) scan_uses(*c, use);
}

bool cut_legal(const RtlGraph& g, uint32_t id, uint32_t p) {
  const ExprRef& def = defining_expr(g, id);
  if (!def) return false;
  uint32_t w = g.node(id).width;
  return slice_expr(def, p - 1, 0) != nullptr && slice_expr(def, w - 1, p) != nullptr;
}

std::vector<std::pair<uint32_t, uint32_t>> slices_from_cuts(
    uint32_t width, const std::set<uint32_t>& cuts) {
  std::vector<std::pair<uint32_t, uint32_t>> out;  // [lo, hi] inclusive
  uint32_t lo = 0;
  for (uint32_t c : cuts) {
    out.emplace_back(lo, c - 1);
    lo = c;
  }
  out.emplace_back(lo, width - 1);
  return out;
}

}  // namespace

BitSliceLattice analyze_bit_usage(const RtlGraph& g, const CostParams& p) {
  std::vector<std::set<uint32_t>> cuts(g.nodes.size());
  std::vector<std::pair<uint32_t, uint32_t>> queue;  // (node, cut position)

  auto enqueue_from = [&](const Expr& e) {
    scan_uses(e, [&](uint32_t node, uint32_t hi, uint32_t lo) {
      queue.emplace_back(node, lo);
      queue.emplace_back(node, hi + 1);
    });
  };
  for (const auto& n : g.nodes)
    if (n.alive && n.expr) enqueue_from(*n.expr);

  while (!queue.empty()) {
    auto [id, pos] = queue.back();
    queue.pop_back();
    const RtlNode& n = g.node(id);
    if (!n.alive || !splittable_kind(n)) continue;
    if (pos == 0 || pos >= n.width) continue;
    if (cuts[id].count(pos)) continue;
    if (!cut_legal(g, id, pos)) continue;
    cuts[id].insert(pos);
    // The two slices adjacent to the new cut access their upstream sources
    // in fresh ranges; propagate those boundaries.
    auto it = cuts[id].find(pos);
    uint32_t lo = it == cuts[id].begin() ? 0 : *std::prev(it);
    uint32_t hi = std::next(it) == cuts[id].end() ? n.width : *std::next(it);
    const ExprRef& def = defining_expr(g, id);
    for (auto [a, b] : {std::pair{lo, pos}, std::pair{pos, hi}}) {
      ExprRef s = slice_expr(def, b - 1, a);
      if (s) enqueue_from(*s);
    }
  }

  // Benefit and size gates. A node splits only if, with the current split
  // set, some consumer use covers a proper subset of its slices.
  std::vector<bool> in_set(g.nodes.size(), false);
  for (uint32_t id = 0; id < g.nodes.size(); id++) {
    if (cuts[id].empty()) continue;
    if (cuts[id].size() + 1 > p.max_slices) {
      cuts[id].clear();
      continue;
    }
    in_set[id] = true;
  }

  bool changed = true;
  while (changed) {
    changed = false;
    // covers_all[id] stays true until a proper-subset use is seen.
    std::vector<bool> partial_use(g.nodes.size(), false);
    auto scan = [&](const Expr& e) {
      scan_uses(e, [&](uint32_t node, uint32_t hi, uint32_t lo) {
        if (!in_set[node]) return;
        if (lo > 0 || hi + 1 < g.node(node).width) partial_use[node] = true;
      });
    };
    for (const auto& n : g.nodes) {
      if (!n.alive) continue;
      const ExprRef& def = n.expr;
      if (!def) continue;
      uint32_t owner = n.kind == NodeKind::RegisterWrite ? n.pair : n.id;
      if (in_set[owner]) {
        // Scan the prospective slice expressions instead of the whole value.
        for (auto [lo, hi] : slices_from_cuts(g.node(owner).width, cuts[owner])) {
          ExprRef s = slice_expr(def, hi, lo);
          if (s) scan(*s);
        }
      } else {
        scan(*def);
      }
    }
    for (uint32_t id = 0; id < g.nodes.size(); id++) {
      if (in_set[id] && !partial_use[id]) {
        in_set[id] = false;
        cuts[id].clear();
        changed = true;
      }
    }
  }

  BitSliceLattice lat;
  lat.cuts.resize(g.nodes.size());
  for (uint32_t id = 0; id < g.nodes.size(); id++)
    lat.cuts[id].assign(cuts[id].begin(), cuts[id].end());
  return lat;
}

void split_nodes(RtlGraph& g, const BitSliceLattice& l, PassReport* report) {
  struct SliceInfo {
    uint32_t lo, hi;
    uint32_t node;  // value-carrying node (read node for registers)
  };
  std::map<uint32_t, std::vector<SliceInfo>> split;  // original id -> slices

  const size_t orig_count = g.nodes.size();
  for (uint32_t id = 0; id < orig_count; id++) {
    const RtlNode n = g.node(id);  // copy; add_node invalidates references
    if (!n.alive || l.cuts[id].empty()) continue;
    std::set<uint32_t> cutset(l.cuts[id].begin(), l.cuts[id].end());
    auto ranges = slices_from_cuts(n.width, cutset);
    std::vector<SliceInfo> infos;
    bool ok = true;

    if (n.kind == NodeKind::Wire) {
      for (auto [lo, hi] : ranges) {
        ExprRef se = slice_expr(n.expr, hi, lo);
        if (!se) {
          ok = false;
          break;
        }
        std::string name =
            n.name + "[" + std::to_string(hi) + ":" + std::to_string(lo) + "]";
        uint32_t nid = g.add_node(NodeKind::Wire, name, hi - lo + 1, false, se);
        infos.push_back({lo, hi, nid});
      }
    } else if (n.kind == NodeKind::RegisterRead) {
      const RtlNode w = g.node(n.pair);
      for (auto [lo, hi] : ranges) {
        ExprRef se = slice_expr(w.expr, hi, lo);
        if (!se) {
          ok = false;
          break;
        }
        std::string base =
            n.name + "[" + std::to_string(hi) + ":" + std::to_string(lo) + "]";
        uint32_t rd = g.add_node(NodeKind::RegisterRead, base, hi - lo + 1, false);
        uint32_t wr = g.add_node(NodeKind::RegisterWrite, base + "$next",
                                 hi - lo + 1, false, se);
        g.node(rd).pair = wr;
        g.node(wr).pair = rd;
        if (w.reset) {
          ResetInfo ri;
          ri.reset_node = w.reset->reset_node;
          ri.init = mk_const(wv_extract(w.reset->init->cval, hi, lo), false);
          g.node(wr).reset = ri;
        }
        infos.push_back({lo, hi, rd});
      }
    } else {
      continue;
    }
    if (!ok) {
      // Roll back any nodes created for this id.
      for (const auto& s : infos) {
        g.node(s.node).alive = false;
        if (g.node(s.node).pair != kNoNode) g.node(g.node(s.node).pair).alive = false;
      }
      continue;
    }
    split[id] = std::move(infos);
  }
  if (split.empty()) return;

  // Rewrite every expression: ranged uses map onto slice nodes, whole-value
  // uses become a reconstructed cat.
  std::function<ExprRef(const ExprRef&)> rewrite = [&](const ExprRef& e) -> ExprRef {
    auto compose = [&](uint32_t node, uint32_t hi, uint32_t lo) -> ExprRef {
      const auto& infos = split.at(node);
      ExprRef acc;
      for (const auto& s : infos) {  // low to high
        if (s.hi < lo || s.lo > hi) continue;
        uint32_t a = std::max(lo, s.lo) - s.lo;
        uint32_t b = std::min(hi, s.hi) - s.lo;
        ExprRef part = mk_ref(s.node, s.hi - s.lo + 1, false);
        if (a != 0 || b != s.hi - s.lo) part = mk_bits(part, b, a);
        acc = acc ? mk_cat(std::move(part), std::move(acc)) : part;
      }
      return acc;
    };
    if (e->op == Op::Bits && e->children[0]->op == Op::Ref &&
        split.count(e->children[0]->node)) {
      return compose(e->children[0]->node, e->arg0, e->arg1);
    }
    if (e->op == Op::Ref && split.count(e->node)) {
      ExprRef full = compose(e->node, e->width - 1, 0);
      if (e->sign) full = mk_op(Op::AsSInt, {std::move(full)});
      return full;
    }
    if (e->children.empty()) return e;
    bool changed = false;
    std::vector<ExprRef> kids;
    kids.reserve(e->children.size());
    for (const auto& c : e->children) {
      ExprRef nc = rewrite(c);
      changed |= nc != c;
      kids.push_back(std::move(nc));
    }
    if (!changed) return e;
    auto ne = std::make_shared<Expr>(*e);
    ne->children = std::move(kids);
    return ne;
  };

  for (auto& n : g.nodes) {
    if (!n.alive || !n.expr) continue;
    n.expr = rewrite(n.expr);
  }
  for (auto& [id, infos] : split) {
    RtlNode& n = g.node(id);
    n.alive = false;
    if (n.pair != kNoNode) g.node(n.pair).alive = false;
    if (report) {
      report->split_nodes++;
      report->split_slices += infos.size();
    }
  }
}

}  // namespace actsim
