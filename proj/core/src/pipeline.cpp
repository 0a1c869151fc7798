#include "actsim/pipeline.hpp"

namespace actsim {

RtlGraph parse_and_lower(const std::string& text, const std::string& filename,
                         DiagEngine& diags, const LowerOptions& opts) {
  (void)filename;  // carried by the DiagEngine
  FirrtlAst ast = parse_firrtl(text, diags);
  FirrtlAst flat = flatten(ast, diags);
  return lower(flat, diags, opts);
}

BuiltSim build_simulation(const RtlGraph& lowered, const PipelineConfig& cfg) {
  BuiltSim b;
  b.graph = std::make_unique<RtlGraph>(lowered);
  RtlGraph& g = *b.graph;
  b.report.nodes_before = g.alive_count();

  if (!cfg.no_opt) {
    if (cfg.simplify) simplify_expressions(g, &b.report);
    if (cfg.eliminate) eliminate_redundant(g, reset_signal_nodes(g), &b.report);
    if (cfg.inline_exprs) decide_inline(g, cfg.cost, &b.report);
    if (cfg.simplify) simplify_expressions(g, &b.report);
    if (cfg.bit_split) {
      BitSliceLattice lat = analyze_bit_usage(g, cfg.cost);
      split_nodes(g, lat, &b.report);
      if (cfg.simplify) simplify_expressions(g, &b.report);
      if (cfg.eliminate) eliminate_redundant(g, reset_signal_nodes(g), &b.report);
    }
    if (cfg.reset_opt) b.groups = build_reset_groups(g, &b.report);
  }
  b.report.nodes_after = g.alive_count();

  std::vector<PreGroup> units = (cfg.pre_group && !cfg.no_opt)
                                    ? pre_group(g, cfg.max_supernode_size)
                                    : singleton_groups(g);
  b.plan = (cfg.kernighan && !cfg.no_opt)
               ? kernighan_refine(g, units, cfg.max_supernode_size)
               : groups_as_plan(g, units);
  b.strategies = choose_activation_strategy(g, cfg.cost);
  b.program = compile(g, b.plan, b.groups, b.strategies);
  b.program.full_eval = cfg.no_opt;
  return b;
}

}  // namespace actsim
