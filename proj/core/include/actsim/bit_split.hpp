#pragma once
// Bit-level node splitting: a node whose bits flow to consumers in disjoint
// contiguous slices is replaced by one node per slice, so a change in one
// slice no longer activates consumers of the others.

#include <set>
#include <vector>

#include "actsim/graph.hpp"
#include "actsim/passes.hpp"

namespace actsim {

struct BitSliceLattice {
  // Per node id: accepted interior cut positions, sorted. A node with cuts
  // {c1 < c2 < ...} partitions [0, width) into [0,c1), [c1,c2), ...
  // Empty set = single slice (no split).
  std::vector<std::vector<uint32_t>> cuts;

  size_t slice_count(uint32_t id) const { return cuts[id].size() + 1; }
};

// Seeds cut candidates at bits() extraction boundaries, validates them
// against the producer's cat/bits/ref/mux/pad structure, propagates upstream
// to a fixed point, then keeps only nodes where at least one consumer path
// avoids a slice (and at most max_slices slices).
BitSliceLattice analyze_bit_usage(const RtlGraph& g, const CostParams& p = {});

// Replaces each multi-slice node with per-slice nodes and rewrites every
// consumer; full-value consumers get a reconstructed cat of the slices.
// Registers split into per-slice register pairs (reset init sliced).
void split_nodes(RtlGraph& g, const BitSliceLattice& l, PassReport* report = nullptr);

// Expression for bits [lo, hi] of `e` through pass-through structure only;
// nullptr when the range crosses an opaque (value-mixing) operator.
ExprRef slice_expr(const ExprRef& e, uint32_t hi, uint32_t lo);

}  // namespace actsim
