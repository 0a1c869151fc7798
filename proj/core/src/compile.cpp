#include <algorithm>
#include <set>

#include "actsim/engine.hpp"

namespace actsim {

namespace {

std::vector<ActivationTarget> targets_for(const std::vector<uint32_t>& consumer_ids,
                                          const SupernodePlan& plan,
                                          uint32_t own_supernode) {
  std::set<uint32_t> supers;
  for (uint32_t c : consumer_ids) {
    uint32_t s = plan.supernode_of[c];
    if (s != kNoNode && s != own_supernode) supers.insert(s);
  }
  std::vector<ActivationTarget> out;
  out.reserve(supers.size());
  for (uint32_t s : supers)
    out.push_back({plan.word_of(s), uint64_t{1} << plan.bit_of(s)});
  return out;
}

}  // namespace

SimProgram compile(const RtlGraph& g, const SupernodePlan& plan,
                   const std::vector<ResetGroup>& groups,
                   const std::vector<ActivationStrategy>& strategies) {
  SimProgram p;
  p.graph = &g;
  p.active_words = plan.active_words;
  p.supernode_in_word.assign(plan.active_words, 0);
  Adjacency adj = g.build_adjacency();

  // Every evaluated node must appear in exactly one supernode.
  std::vector<uint32_t> seen(g.nodes.size(), 0);
  for (const auto& members : plan.members)
    for (uint32_t id : members) seen[id]++;
  for (const auto& n : g.nodes) {
    uint32_t expect = (n.alive && n.expr) ? 1 : 0;
    if (seen[n.id] != expect)
      throw SimError("inconsistent supernode plan at node '" + n.name + "'");
  }

  p.blocks.resize(plan.count());
  for (uint32_t s = 0; s < plan.count(); s++) {
    Block& b = p.blocks[s];
    b.word = plan.word_of(s);
    b.bit_mask = uint64_t{1} << plan.bit_of(s);
    p.supernode_in_word[b.word]++;
    for (uint32_t id : plan.members[s]) {
      NodeTask t;
      t.node = id;
      t.strategy = strategies[id];
      const RtlNode& n = g.node(id);
      if (n.kind == NodeKind::RegisterWrite && n.reset && n.expr &&
          n.expr->op == Op::Mux && n.expr->children[0]->op == Op::Ref &&
          n.expr->children[0]->node == n.reset->reset_node)
        t.counts_reset_check = true;
      t.targets = targets_for(adj.succs[id], plan, s);
      b.tasks.push_back(std::move(t));
      p.node_count++;
    }
  }

  for (const auto& n : g.nodes) {
    if (!n.alive) continue;
    if (n.kind == NodeKind::RegisterWrite) {
      CommitEntry c;
      c.write = n.id;
      c.read = n.pair;
      c.targets = targets_for(adj.succs[n.pair], plan, kNoNode);
      p.commits.push_back(std::move(c));
    } else if (n.kind == NodeKind::MemWrite) {
      const MemDesc& m = g.mems[n.mem];
      MemCommitEntry e;
      e.node = n.id;
      e.mem = n.mem;
      e.addr_width = m.addr_width;
      e.data_width = m.data_width;
      e.read_targets = targets_for(m.read_ports, plan, kNoNode);
      p.mem_commits.push_back(std::move(e));
    } else if (n.kind == NodeKind::Input) {
      InputEntry e;
      e.node = n.id;
      e.targets = targets_for(adj.succs[n.id], plan, kNoNode);
      p.inputs.push_back(std::move(e));
    }
  }

  for (const auto& grp : groups) {
    ResetEntry e;
    e.reset_node = grp.reset_node;
    for (const auto& [write_id, init] : grp.members) {
      const RtlNode& w = g.node(write_id);
      if (!w.alive) continue;
      ResetEntry::Member m;
      m.read = w.pair;
      m.init = init->cval;
      m.targets = targets_for(adj.succs[w.pair], plan, kNoNode);
      e.members.push_back(std::move(m));
    }
    if (!e.members.empty()) p.resets.push_back(std::move(e));
  }
  return p;
}

}  // namespace actsim
