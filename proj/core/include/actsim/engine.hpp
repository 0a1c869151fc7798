#pragma once
// Statically scheduled activity-driven execution: supernode blocks in
// topological order, word-grouped active checks, per-producer activation
// lists, register/memory commit, and the reset slow path.

#include <stdexcept>
#include <string>
#include <vector>

#include "actsim/eval.hpp"
#include "actsim/graph.hpp"
#include "actsim/metrics.hpp"
#include "actsim/partition.hpp"
#include "actsim/passes.hpp"
#include "actsim/wide_value.hpp"

namespace actsim {

struct SimError : std::runtime_error {
  explicit SimError(const std::string& m) : std::runtime_error(m) {}
};

struct ActivationTarget {
  uint32_t word = 0;
  uint64_t bit_mask = 0;
};

struct NodeTask {
  uint32_t node = kNoNode;
  ActivationStrategy strategy = ActivationStrategy::Branching;
  bool counts_reset_check = false;  // write expr still tests reset inline
  std::vector<ActivationTarget> targets;
};

struct Block {
  uint32_t word = 0;
  uint64_t bit_mask = 0;
  std::vector<NodeTask> tasks;
};

struct CommitEntry {
  uint32_t read = kNoNode, write = kNoNode;
  std::vector<ActivationTarget> targets;
};

struct MemCommitEntry {
  uint32_t node = kNoNode;
  uint32_t mem = 0;
  uint32_t addr_width = 0, data_width = 0;
  std::vector<ActivationTarget> read_targets;
};

struct ResetEntry {
  uint32_t reset_node = kNoNode;
  struct Member {
    uint32_t read = kNoNode;
    WideValue init;
    std::vector<ActivationTarget> targets;
  };
  std::vector<Member> members;
};

struct InputEntry {
  uint32_t node = kNoNode;
  std::vector<ActivationTarget> targets;
};

struct SimProgram {
  const RtlGraph* graph = nullptr;  // not owned; must outlive the program
  std::vector<Block> blocks;        // supernode topological order
  std::vector<uint32_t> supernode_in_word;  // per word: supernode count
  std::vector<CommitEntry> commits;
  std::vector<MemCommitEntry> mem_commits;
  std::vector<ResetEntry> resets;
  std::vector<InputEntry> inputs;
  uint32_t active_words = 0;
  uint64_t node_count = 0;  // evaluated nodes (af denominator)
  bool full_eval = false;   // evaluate every block every cycle
};

// Throws SimError on an inconsistent plan (node missing or duplicated).
SimProgram compile(const RtlGraph& g, const SupernodePlan& plan,
                   const std::vector<ResetGroup>& groups,
                   const std::vector<ActivationStrategy>& strategies);

struct SimState {
  std::vector<WideValue> values;  // by node id
  std::vector<uint64_t> active;
  std::vector<std::vector<WideValue>> mem_stores;
  uint64_t cycle = 0;
  MetricCounters metrics;
};

// Shared harness interface for the optimized engine and the oracle.
class SimDriver {
public:
  virtual ~SimDriver() = default;
  virtual void poke(const std::string& name, const WideValue& v) = 0;
  virtual void step(uint64_t n = 1) = 0;
  virtual WideValue peek(const std::string& name) const = 0;
  virtual const WideValue& value_of(uint32_t node) const = 0;
  virtual const RtlGraph& graph() const = 0;
  virtual uint64_t cycle() const = 0;
  virtual const MetricCounters& metrics() const = 0;

  // Input ports acting as a reset signal of some register.
  std::vector<std::string> reset_input_names() const;
  // Alive Output nodes sorted by name (the comparison trace).
  std::vector<uint32_t> output_ids() const;
};

class Engine final : public SimDriver {
public:
  explicit Engine(const SimProgram& prog);

  void poke(const std::string& name, const WideValue& v) override;
  void poke_id(uint32_t input_id, const WideValue& v);
  void step(uint64_t n = 1) override;
  WideValue peek(const std::string& name) const override;
  const WideValue& value_of(uint32_t node) const override {
    return state_.values[node];
  }
  const RtlGraph& graph() const override { return *prog_->graph; }
  uint64_t cycle() const override { return state_.cycle; }
  const MetricCounters& metrics() const override { return state_.metrics; }
  MetricCounters& mutable_metrics() { return state_.metrics; }

  const SimState& state() const { return state_; }

private:
  void step_once();
  void eval_block(const Block& b, uint64_t& active_nodes);

  const SimProgram* prog_;
  SimState state_;
  std::vector<std::pair<uint32_t, WideValue>> pending_pokes_;
  class Env;
};

}  // namespace actsim
