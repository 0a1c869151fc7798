#include <set>

#include "actsim/passes.hpp"

namespace actsim {

// Extract keeps the node; inline duplicates f into each consumer. The
// inequality compares total evaluation work: cost(f) * #f against paying
// cost(f) once plus the node overhead.
void decide_inline(RtlGraph& g, const CostParams& p, PassReport* report) {
  std::set<uint32_t> prot;
  for (uint32_t id : reset_signal_nodes(g)) prot.insert(id);

  std::vector<uint32_t> order = g.topo_order();
  for (uint32_t id : order) {
    RtlNode& n = g.node(id);
    if (!n.alive || n.kind != NodeKind::Wire || !n.expr) continue;
    if (prot.count(id)) continue;
    if (contains_mem_load(*n.expr)) continue;  // read ports are never duplicated

    uint64_t refs = 0;
    for (const auto& m : g.nodes)
      if (m.alive && m.expr && m.id != id) refs += count_refs_to(*m.expr, id);
    if (refs == 0) continue;  // dead; elimination's business

    uint64_t c = expr_cost(*n.expr, p);
    if (c * refs > c + p.cost_node) {
      if (report) report->extracted++;
      continue;
    }
    // Inline: substitute the defining expression at every use.
    ExprRef def = n.expr;
    for (auto& m : g.nodes) {
      if (!m.alive || !m.expr || m.id == id) continue;
      m.expr = expr_rewrite(m.expr, [&](const ExprRef& x) -> ExprRef {
        if (x->op == Op::Ref && x->node == id) return def;
        return nullptr;
      });
    }
    n.alive = false;
    if (report) report->inlined++;
  }
}

}  // namespace actsim
