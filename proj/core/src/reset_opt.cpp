#include <map>

#include "actsim/passes.hpp"

namespace actsim {

// Speculative register update: the write expression drops its reset mux and
// the (register, init) pair moves to a per-reset-signal slow-path table
// checked once per cycle.
std::vector<ResetGroup> build_reset_groups(RtlGraph& g, PassReport* report) {
  std::map<uint32_t, ResetGroup> groups;
  for (auto& n : g.nodes) {
    if (!n.alive || n.kind != NodeKind::RegisterWrite || !n.reset) continue;
    const ExprRef& e = n.expr;
    if (!e || e->op != Op::Mux) continue;
    const Expr& cond = *e->children[0];
    if (cond.op != Op::Ref || cond.node != n.reset->reset_node) continue;
    if (e->children[1]->op != Op::Const) continue;
    ExprRef init = e->children[1];
    ExprRef next = e->children[2];
    if (next->width < n.width) next = mk_pad(next, n.width);
    n.expr = next;
    ResetGroup& grp = groups[n.reset->reset_node];
    grp.reset_node = n.reset->reset_node;
    grp.members.emplace_back(n.id, std::move(init));
  }
  std::vector<ResetGroup> out;
  out.reserve(groups.size());
  for (auto& [id, grp] : groups) out.push_back(std::move(grp));
  if (report)
    for (const auto& grp : out) report->reset_group_sizes.push_back(grp.members.size());
  return out;
}

}  // namespace actsim
