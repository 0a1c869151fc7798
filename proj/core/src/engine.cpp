#include "actsim/engine.hpp"

#include <algorithm>

namespace actsim {

std::vector<std::string> SimDriver::reset_input_names() const {
  const RtlGraph& g = graph();
  std::vector<std::string> names;
  for (const auto& n : g.nodes) {
    if (!n.alive || !n.reset) continue;
    const RtlNode& r = g.node(n.reset->reset_node);
    if (r.kind == NodeKind::Input) names.push_back(r.name);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

std::vector<uint32_t> SimDriver::output_ids() const {
  const RtlGraph& g = graph();
  std::vector<uint32_t> ids;
  for (const auto& n : g.nodes)
    if (n.alive && n.kind == NodeKind::Output) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end(), [&](uint32_t a, uint32_t b) {
    return g.node(a).name < g.node(b).name;
  });
  return ids;
}

class Engine::Env final : public EvalEnv {
public:
  explicit Env(const SimState& s) : s_(s) {}
  const WideValue& node_value(uint32_t id) const override { return s_.values[id]; }
  WideValue mem_load(uint32_t mem, const WideValue& addr) const override {
    const auto& store = s_.mem_stores[mem];
    uint64_t a = addr.low_u64();
    bool oob = a >= store.size();
    for (uint32_t i = 1; i < addr.num_words(); i++)
      if (addr.word(i) != 0) oob = true;
    if (oob) return WideValue(store.empty() ? 1 : store[0].width());
    return store[a];
  }

private:
  const SimState& s_;
};

Engine::Engine(const SimProgram& prog) : prog_(&prog) {
  const RtlGraph& g = *prog.graph;
  state_.values.resize(g.nodes.size());
  for (const auto& n : g.nodes) state_.values[n.id].reset(n.width);
  state_.active.assign(prog.active_words, 0);
  // Cycle 1 evaluates everything: set the active bit of every supernode.
  for (const auto& b : prog.blocks) state_.active[b.word] |= b.bit_mask;
  state_.mem_stores.resize(g.mems.size());
  for (size_t i = 0; i < g.mems.size(); i++) {
    state_.mem_stores[i].resize(g.mems[i].depth);
    for (auto& v : state_.mem_stores[i]) v.reset(g.mems[i].data_width);
  }
  state_.metrics.supernode_evals.assign(prog.blocks.size(), 0);
}

void Engine::poke(const std::string& name, const WideValue& v) {
  uint32_t id = prog_->graph->find_by_name(name);
  if (id == kNoNode) throw SimError("unknown signal '" + name + "'");
  poke_id(id, v);
}

void Engine::poke_id(uint32_t input_id, const WideValue& v) {
  const RtlNode& n = prog_->graph->node(input_id);
  if (n.kind != NodeKind::Input)
    throw SimError("poke of non-input signal '" + n.name + "'");
  if (v.width() > n.width) {
    WideValue fit = v.extended(n.width, false);
    WideValue back = fit.extended(v.width(), false);
    if (back != v)
      throw SimError("poke value does not fit input '" + n.name + "'");
    pending_pokes_.emplace_back(input_id, std::move(fit));
    return;
  }
  pending_pokes_.emplace_back(input_id, v.extended(n.width, false));
}

WideValue Engine::peek(const std::string& name) const {
  uint32_t id = prog_->graph->find_by_name(name);
  if (id == kNoNode) throw SimError("unknown signal '" + name + "'");
  return state_.values[id];
}

void Engine::step(uint64_t n) {
  for (uint64_t i = 0; i < n; i++) step_once();
}

void Engine::eval_block(const Block& b, uint64_t& active_nodes) {
  Env env(state_);
  const RtlGraph& g = *prog_->graph;
  auto& m = state_.metrics;
  for (const NodeTask& t : b.tasks) {
    const RtlNode& n = g.node(t.node);
    WideValue next = eval_expr(*n.expr, env);
    if (prog_->full_eval) {
      // Verilator-style baseline: no change tracking, no activation.
      state_.values[t.node] = std::move(next);
      m.evaluated_nodes++;
      active_nodes++;
      if (t.counts_reset_check) m.reset_checks++;
      continue;
    }
    bool changed = next != state_.values[t.node];
    state_.values[t.node] = std::move(next);
    m.evaluated_nodes++;
    active_nodes++;
    if (t.counts_reset_check) m.reset_checks++;
    if (t.strategy == ActivationStrategy::Branchless) {
      m.activations += t.targets.size();
      uint64_t flag = changed ? ~uint64_t{0} : 0;
      for (const auto& tgt : t.targets)
        state_.active[tgt.word] |= tgt.bit_mask & flag;
    } else {
      m.activations += 1;
      if (changed) {
        m.activations += t.targets.size();
        for (const auto& tgt : t.targets) state_.active[tgt.word] |= tgt.bit_mask;
      }
    }
  }
}

void Engine::step_once() {
  auto& m = state_.metrics;
  uint64_t active_nodes = 0;

  // (1) pokes; a changed input activates its consumers
  if (!pending_pokes_.empty()) {
    for (auto& [id, v] : pending_pokes_) {
      if (state_.values[id] == v) continue;
      state_.values[id] = std::move(v);
      for (const auto& e : prog_->inputs) {
        if (e.node != id) continue;
        m.activations += e.targets.size();
        for (const auto& tgt : e.targets) state_.active[tgt.word] |= tgt.bit_mask;
        break;
      }
    }
    pending_pokes_.clear();
  }

  // (2) sweep active words in supernode topological order
  if (prog_->full_eval) {
    for (uint32_t s = 0; s < prog_->blocks.size(); s++) {
      m.supernode_evals[s]++;
      eval_block(prog_->blocks[s], active_nodes);
    }
  } else {
    uint32_t sn_base = 0;
    for (uint32_t w = 0; w < prog_->active_words; w++) {
      m.examinations++;  // one test skips the whole word when clear
      if (state_.active[w] != 0) {
        m.examinations += prog_->supernode_in_word[w];
        for (uint32_t bit = 0; bit < 64; bit++) {
          uint64_t mask = uint64_t{1} << bit;
          // Re-read each iteration: an earlier block may have activated a
          // later supernode in this same word.
          if (!(state_.active[w] & mask)) continue;
          uint32_t s = sn_base + bit;
          if (s >= prog_->blocks.size()) break;
          state_.active[w] &= ~mask;  // clear before evaluation
          m.supernode_evals[s]++;
          eval_block(prog_->blocks[s], active_nodes);
        }
      }
      sn_base += 64;
    }
  }

  // (3) commit registers; a changed read value activates its consumers
  if (prog_->full_eval) {
    for (const auto& c : prog_->commits)
      state_.values[c.read] = state_.values[c.write];
  } else {
    for (const auto& c : prog_->commits) {
      if (state_.values[c.write] != state_.values[c.read]) {
        state_.values[c.read] = state_.values[c.write];
        m.activations += c.targets.size();
        for (const auto& tgt : c.targets) state_.active[tgt.word] |= tgt.bit_mask;
      }
    }
  }

  // (3b) commit memory writes; a changed store activates the read ports
  for (const auto& e : prog_->mem_commits) {
    const WideValue& packed = state_.values[e.node];
    if (!packed.bit(e.data_width)) continue;  // enable
    uint64_t addr = 0;
    {
      WideValue a = wv_extract(packed, e.addr_width + e.data_width,
                               e.data_width + 1);
      addr = a.low_u64();
    }
    auto& store = state_.mem_stores[e.mem];
    if (addr >= store.size()) continue;
    WideValue data = wv_extract(packed, e.data_width - 1, 0);
    if (store[addr] != data) {
      store[addr] = std::move(data);
      m.activations += e.read_targets.size();
      for (const auto& tgt : e.read_targets) state_.active[tgt.word] |= tgt.bit_mask;
    }
  }

  // (4) reset slow path: one check per reset signal per cycle
  for (const auto& r : prog_->resets) {
    m.reset_checks++;
    if (state_.values[r.reset_node].is_zero()) continue;
    for (const auto& mem : r.members) {
      state_.values[mem.read] = mem.init;
      m.activations += mem.targets.size();
      for (const auto& tgt : mem.targets) state_.active[tgt.word] |= tgt.bit_mask;
    }
  }

  // (5) consumed bits were cleared per-block; (6) counters
  state_.cycle++;
  m.cycles++;
  if (prog_->node_count > 0)
    m.af_accum += (double)active_nodes / (double)prog_->node_count;
  m.active_histogram[active_nodes]++;
}

}  // namespace actsim
