#pragma once
// Reference interpreter: evaluates every node every cycle in topological
// order, no activity tracking, no optimization awareness. Ground truth for
// differential testing.

#include "actsim/engine.hpp"

namespace actsim {

class OracleSim final : public SimDriver {
public:
  // Runs any graph, raw or pass-transformed. Graphs whose registers were
  // rewritten by the reset pass must hand in their ResetGroups.
  explicit OracleSim(const RtlGraph& g, std::vector<ResetGroup> groups = {});

  void poke(const std::string& name, const WideValue& v) override;
  void step(uint64_t n = 1) override;
  WideValue peek(const std::string& name) const override;
  const WideValue& value_of(uint32_t node) const override {
    return state_.values[node];
  }
  const RtlGraph& graph() const override { return *g_; }
  uint64_t cycle() const override { return state_.cycle; }
  const MetricCounters& metrics() const override { return state_.metrics; }

private:
  void step_once();

  const RtlGraph* g_;
  std::vector<ResetGroup> groups_;
  std::vector<uint32_t> order_;
  std::vector<uint32_t> commit_writes_;  // RegisterWrite ids
  std::vector<uint32_t> mem_writes_;     // MemWrite ids
  SimState state_;
  std::vector<std::pair<uint32_t, WideValue>> pending_pokes_;
  class Env;
};

}  // namespace actsim
