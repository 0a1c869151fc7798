#pragma once
// Supernode construction: pre-grouping of strongly correlated nodes, then
// size-capped Kernighan refinement over whole pre-groups, then active-bit
// layout. Only evaluated nodes (those carrying expressions) join supernodes;
// Input and RegisterRead sources activate consumers directly.

#include <cstdint>
#include <vector>

#include "actsim/graph.hpp"

namespace actsim {

struct PreGroup {
  enum class Reason : uint8_t { Singleton, OutDegreeOne, InDegreeOne, Siblings };
  Reason reason = Reason::Singleton;  // rule of the first fusion
  std::vector<uint32_t> members;      // node ids, topological order
};

struct SupernodePlan {
  // node id -> supernode id; kNoNode for sources and dead nodes.
  std::vector<uint32_t> supernode_of;
  // Supernode ids are assigned in contracted-DAG topological order, so the
  // active-bit layout is simply word = id / 64, bit = id % 64.
  std::vector<std::vector<uint32_t>> members;  // intra-supernode topo order
  std::vector<std::vector<uint32_t>> succs;    // supernode-level, deduplicated
  uint64_t cut_size = 0;
  uint32_t active_words = 0;

  uint32_t word_of(uint32_t s) const { return s / 64; }
  uint32_t bit_of(uint32_t s) const { return s % 64; }
  size_t count() const { return members.size(); }
};

// Union-find fusion in rule order: out-degree-1 with successor, in-degree-1
// with predecessor, identical-predecessor siblings. A fusion is skipped when
// it would exceed max_size or create a cycle in the contracted DAG.
std::vector<PreGroup> pre_group(const RtlGraph& g, uint32_t max_size);

// One singleton group per evaluated node (pre-grouping disabled).
std::vector<PreGroup> singleton_groups(const RtlGraph& g);

// Greedy topological packing of groups up to max_size, then repeated
// positive-gain moves of whole groups between adjacent supernodes. Gain is
// the reduction in inter-supernode edge count; the supernode DAG stays
// acyclic and sizes stay within max_size after every accepted move.
SupernodePlan kernighan_refine(const RtlGraph& g, const std::vector<PreGroup>& groups,
                               uint32_t max_size, int pass_limit = 10);

// Each group becomes its own supernode (refinement disabled).
SupernodePlan groups_as_plan(const RtlGraph& g, const std::vector<PreGroup>& groups);

}  // namespace actsim
