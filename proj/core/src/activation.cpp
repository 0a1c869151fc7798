#include "actsim/passes.hpp"

namespace actsim {

// Branchless activation ORs the changed flag into every successor's active
// word unconditionally; with many successors the extra ops outweigh the
// saved branch, so such producers test the flag once instead.
std::vector<ActivationStrategy> choose_activation_strategy(const RtlGraph& g,
                                                           const CostParams& p) {
  std::vector<ActivationStrategy> out(g.nodes.size(), ActivationStrategy::Branching);
  if (p.activation_branchless_threshold == 0) return out;
  Adjacency adj = g.build_adjacency();
  for (const auto& n : g.nodes) {
    if (!n.alive) continue;
    if (adj.succs[n.id].size() <= p.activation_branchless_threshold)
      out[n.id] = ActivationStrategy::Branchless;
  }
  return out;
}

}  // namespace actsim
