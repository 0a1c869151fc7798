#include "actsim/reports.hpp"

namespace actsim {

nlohmann::json metrics_json(const MetricCounters& m, uint64_t node_count,
                            size_t supernodes) {
  nlohmann::json j;
  j["cycles"] = m.cycles;
  j["af_mean"] = m.af_mean();
  j["evaluated_nodes"] = m.evaluated_nodes;
  j["activations"] = m.activations;
  j["examinations"] = m.examinations;
  j["supernodes"] = supernodes;
  j["node_count"] = node_count;
  j["reset_checks"] = m.reset_checks;
  j["supernode_activation_counts"] = m.supernode_evals;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [active, cycles] : m.active_histogram)
    hist[std::to_string(active)] = cycles;
  j["active_node_histogram"] = hist;
  return j;
}

nlohmann::json pass_report_json(const PassReport& r) {
  nlohmann::json j;
  j["nodes_before"] = r.nodes_before;
  j["nodes_after"] = r.nodes_after;
  j["simplify_rewrites"] = r.simplify_rewrites;
  j["onehot_rewrites"] = r.onehot_rewrites;
  j["removed"] = {{"alias", r.removals.alias},
                  {"dead", r.removals.dead},
                  {"shorted", r.removals.shorted},
                  {"unused_registers", r.removals.unused_regs}};
  j["inlined"] = r.inlined;
  j["extracted"] = r.extracted;
  j["reset_group_sizes"] = r.reset_group_sizes;
  j["bit_split"] = {{"nodes", r.split_nodes}, {"slices", r.split_slices}};
  return j;
}

nlohmann::json model_json(const OverheadModel& m) {
  nlohmann::json j;
  j["E"] = m.e_weight;
  j["A_succ"] = m.a_succ_weight;
  j["A_exam"] = m.a_exam_weight;
  j["calibrated"] = m.calibrated;
  if (m.calibrated) j["predicted_T"] = predict_cycle_cost(m);
  return j;
}

}  // namespace actsim
