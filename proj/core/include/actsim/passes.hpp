#pragma once
// Node-level optimization passes: expression simplification, redundant node
// elimination, the inline/extract cost decision, activation strategy
// selection, and the reset slow-path transformation.

#include <cstdint>
#include <vector>

#include "actsim/expr.hpp"
#include "actsim/graph.hpp"

namespace actsim {

struct ResetGroup {
  uint32_t reset_node = kNoNode;
  std::vector<std::pair<uint32_t, ExprRef>> members;  // (RegisterWrite id, init)
};

struct RemovalReport {
  std::vector<uint32_t> alias;
  std::vector<uint32_t> dead;
  std::vector<uint32_t> shorted;
  std::vector<uint32_t> unused_regs;  // RegisterRead ids (pairs removed)

  size_t total() const {
    return alias.size() + dead.size() + shorted.size() + unused_regs.size();
  }
};

struct PassReport {
  size_t nodes_before = 0;
  size_t nodes_after = 0;
  size_t simplify_rewrites = 0;
  size_t onehot_rewrites = 0;
  RemovalReport removals;
  size_t inlined = 0;
  size_t extracted = 0;
  std::vector<size_t> reset_group_sizes;
  size_t split_nodes = 0;
  size_t split_slices = 0;
};

// Rewrites every expression to a fixed point of constant folding, identity
// laws, mux folding, cat/bits cancellation, and the one-hot pattern
// bits(dshl(1, A), k, k) -> eq(A, k). Never increases expr_cost.
void simplify_expressions(RtlGraph& g, PassReport* report = nullptr);

// Removes alias, dead, shorted nodes and unused registers. `protect` nodes
// are treated as live roots and are never forwarded or removed.
void eliminate_redundant(RtlGraph& g, const std::vector<uint32_t>& protect = {},
                         PassReport* report = nullptr);

// Inlines wire expressions into their consumers unless
// cost(f) * #refs > cost(f) + cost_node. Applied in topological order.
void decide_inline(RtlGraph& g, const CostParams& p, PassReport* report = nullptr);

enum class ActivationStrategy : uint8_t { Branching, Branchless };

// Per producer node: Branchless when the successor count is within the
// threshold, Branching otherwise (threshold 0 disables branchless entirely).
std::vector<ActivationStrategy> choose_activation_strategy(const RtlGraph& g,
                                                           const CostParams& p);

// Strips mux(reset, init, next) from RegisterWrite expressions and groups
// the registers by reset signal for the end-of-cycle slow path.
std::vector<ResetGroup> build_reset_groups(RtlGraph& g, PassReport* report = nullptr);

// Node ids that must survive elimination/inlining (reset signals referenced
// by ResetInfo records).
std::vector<uint32_t> reset_signal_nodes(const RtlGraph& g);

}  // namespace actsim
