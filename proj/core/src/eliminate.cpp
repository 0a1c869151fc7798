#include <algorithm>
#include <set>

#include "actsim/passes.hpp"

namespace actsim {

namespace {

// Liveness from {Output, MemWrite, protected} roots. RegisterWrite is live
// only through its read node, so self-updating unused registers go dead.
std::vector<bool> compute_live(const RtlGraph& g, const std::set<uint32_t>& protect) {
  std::vector<bool> live(g.nodes.size(), false);
  std::vector<uint32_t> work;
  auto mark = [&](uint32_t id) {
    if (id != kNoNode && g.node(id).alive && !live[id]) {
      live[id] = true;
      work.push_back(id);
    }
  };
  for (const auto& n : g.nodes) {
    if (!n.alive) continue;
    if (n.kind == NodeKind::Output || n.kind == NodeKind::MemWrite) mark(n.id);
    if (protect.count(n.id)) mark(n.id);
  }
  while (!work.empty()) {
    uint32_t id = work.back();
    work.pop_back();
    const RtlNode& n = g.node(id);
    if (n.expr)
      for_each_ref(*n.expr, [&](const Expr& r) { mark(r.node); });
    if (n.kind == NodeKind::RegisterRead) mark(n.pair);
  }
  return live;
}

ExprRef fold_const_mux(const ExprRef& e, size_t* count) {
  return expr_rewrite(e, [&](const ExprRef& x) -> ExprRef {
    if (x->op != Op::Mux || x->children[0]->op != Op::Const) return nullptr;
    (*count)++;
    ExprRef arm = x->children[0]->cval.is_zero() ? x->children[2] : x->children[1];
    if (arm->width < x->width) arm = mk_pad(arm, x->width);
    if (arm->sign != x->sign)
      arm = mk_op(x->sign ? Op::AsSInt : Op::AsUInt, {std::move(arm)});
    return arm;
  });
}

}  // namespace

std::vector<uint32_t> reset_signal_nodes(const RtlGraph& g) {
  std::vector<uint32_t> ids;
  for (const auto& n : g.nodes)
    if (n.alive && n.reset) ids.push_back(n.reset->reset_node);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void eliminate_redundant(RtlGraph& g, const std::vector<uint32_t>& protect,
                         PassReport* report) {
  std::set<uint32_t> prot(protect.begin(), protect.end());
  RemovalReport rem;

  // Alias forwarding: wires whose expression is a bare full-width ref.
  std::vector<uint32_t> fwd(g.nodes.size(), kNoNode);
  for (const auto& n : g.nodes) {
    if (!n.alive || n.kind != NodeKind::Wire || prot.count(n.id)) continue;
    if (n.expr && n.expr->op == Op::Ref) fwd[n.id] = n.expr->node;
  }
  auto resolve = [&](uint32_t id) {
    while (fwd[id] != kNoNode) id = fwd[id];
    return id;
  };
  bool any_alias = false;
  for (uint32_t id = 0; id < g.nodes.size(); id++)
    if (fwd[id] != kNoNode) any_alias = true;
  if (any_alias) {
    for (auto& n : g.nodes) {
      if (!n.alive) continue;
      if (n.expr)
        n.expr = expr_rewrite(n.expr, [&](const ExprRef& x) -> ExprRef {
          if (x->op != Op::Ref || fwd[x->node] == kNoNode) return nullptr;
          uint32_t t = resolve(x->node);
          return mk_ref(t, x->width, x->sign);
        });
      if (n.reset && fwd[n.reset->reset_node] != kNoNode)
        n.reset->reset_node = resolve(n.reset->reset_node);
    }
    for (uint32_t id = 0; id < g.nodes.size(); id++) {
      if (fwd[id] != kNoNode && g.node(id).alive) {
        g.node(id).alive = false;
        rem.alias.push_back(id);
      }
    }
  }

  // Dead vs shorted: liveness before and after folding constant-condition
  // muxes tells the two categories apart.
  std::vector<bool> live0 = compute_live(g, prot);
  size_t folds = 0;
  for (auto& n : g.nodes) {
    if (!n.alive || !n.expr) continue;
    n.expr = fold_const_mux(n.expr, &folds);
  }
  std::vector<bool> live1 = folds ? compute_live(g, prot) : live0;

  for (auto& n : g.nodes) {
    if (!n.alive || live1[n.id]) continue;
    if (n.kind == NodeKind::Input) continue;  // external interface stays
    if (n.kind == NodeKind::RegisterWrite) continue;  // removed with its read
    if (n.kind == NodeKind::RegisterRead) {
      n.alive = false;
      g.node(n.pair).alive = false;
      rem.unused_regs.push_back(n.id);
      continue;
    }
    n.alive = false;
    if (n.kind == NodeKind::MemRead) {
      MemDesc& m = g.mems[n.mem];
      m.read_ports.erase(std::remove(m.read_ports.begin(), m.read_ports.end(), n.id),
                         m.read_ports.end());
    }
    if (live0[n.id])
      rem.shorted.push_back(n.id);
    else
      rem.dead.push_back(n.id);
  }

  if (report) {
    auto& dst = report->removals;
    auto append = [](std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
      a.insert(a.end(), b.begin(), b.end());
    };
    append(dst.alias, rem.alias);
    append(dst.dead, rem.dead);
    append(dst.shorted, rem.shorted);
    append(dst.unused_regs, rem.unused_regs);
  }
}

}  // namespace actsim
