#pragma once
// Full compilation pipeline: parse -> flatten -> lower -> node-level passes
// -> bit split -> reset groups -> partition -> SimProgram.

#include <memory>
#include <string>

#include "actsim/bit_split.hpp"
#include "actsim/engine.hpp"
#include "actsim/lower.hpp"
#include "actsim/partition.hpp"
#include "actsim/passes.hpp"

namespace actsim {

struct PipelineConfig {
  uint32_t max_supernode_size = 35;
  bool simplify = true;
  bool eliminate = true;
  bool inline_exprs = true;
  bool reset_opt = true;
  bool bit_split = true;
  bool pre_group = true;
  bool kernighan = true;
  bool no_opt = false;  // skip all passes and evaluate everything every cycle
  CostParams cost;
  LowerOptions lower;

  void disable_all_passes() {
    simplify = eliminate = inline_exprs = reset_opt = false;
    bit_split = pre_group = kernighan = false;
  }
};

struct BuiltSim {
  std::unique_ptr<RtlGraph> graph;  // post-pass graph the program runs on
  std::vector<ResetGroup> groups;
  SupernodePlan plan;
  std::vector<ActivationStrategy> strategies;
  SimProgram program;
  PassReport report;
};

RtlGraph parse_and_lower(const std::string& text, const std::string& filename,
                         DiagEngine& diags, const LowerOptions& opts = {});

BuiltSim build_simulation(const RtlGraph& lowered, const PipelineConfig& cfg);

}  // namespace actsim
