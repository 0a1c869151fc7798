#include "actsim/oracle.hpp"

namespace actsim {

class OracleSim::Env final : public EvalEnv {
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

OracleSim::OracleSim(const RtlGraph& g, std::vector<ResetGroup> groups)
    : g_(&g), groups_(std::move(groups)) {
  order_ = g.topo_order();
  state_.values.resize(g.nodes.size());
  for (const auto& n : g.nodes) state_.values[n.id].reset(n.width);
  state_.mem_stores.resize(g.mems.size());
  for (size_t i = 0; i < g.mems.size(); i++) {
    state_.mem_stores[i].resize(g.mems[i].depth);
    for (auto& v : state_.mem_stores[i]) v.reset(g.mems[i].data_width);
  }
  for (const auto& n : g.nodes) {
    if (!n.alive) continue;
    if (n.kind == NodeKind::RegisterWrite) commit_writes_.push_back(n.id);
    if (n.kind == NodeKind::MemWrite) mem_writes_.push_back(n.id);
  }
}

void OracleSim::poke(const std::string& name, const WideValue& v) {
  uint32_t id = g_->find_by_name(name);
  if (id == kNoNode) throw SimError("unknown signal '" + name + "'");
  const RtlNode& n = g_->node(id);
  if (n.kind != NodeKind::Input)
    throw SimError("poke of non-input signal '" + name + "'");
  if (v.width() > n.width) {
    WideValue fit = v.extended(n.width, false);
    if (fit.extended(v.width(), false) != v)
      throw SimError("poke value does not fit input '" + name + "'");
    pending_pokes_.emplace_back(id, std::move(fit));
    return;
  }
  pending_pokes_.emplace_back(id, v.extended(n.width, false));
}

WideValue OracleSim::peek(const std::string& name) const {
  uint32_t id = g_->find_by_name(name);
  if (id == kNoNode) throw SimError("unknown signal '" + name + "'");
  return state_.values[id];
}

void OracleSim::step(uint64_t n) {
  for (uint64_t i = 0; i < n; i++) step_once();
}

void OracleSim::step_once() {
  for (auto& [id, v] : pending_pokes_) state_.values[id] = std::move(v);
  pending_pokes_.clear();

  Env env(state_);
  for (uint32_t id : order_) {
    const RtlNode& n = g_->node(id);
    if (!n.expr) continue;
    state_.values[id] = eval_expr(*n.expr, env);
    state_.metrics.evaluated_nodes++;
  }
  for (uint32_t id : commit_writes_)
    state_.values[g_->node(id).pair] = state_.values[id];
  for (uint32_t id : mem_writes_) {
    const RtlNode& n = g_->node(id);
    const MemDesc& m = g_->mems[n.mem];
    const WideValue& packed = state_.values[id];
    if (!packed.bit(m.data_width)) continue;
    WideValue a = wv_extract(packed, m.addr_width + m.data_width, m.data_width + 1);
    uint64_t addr = a.low_u64();
    auto& store = state_.mem_stores[n.mem];
    if (addr >= store.size()) continue;
    store[addr] = wv_extract(packed, m.data_width - 1, 0);
  }
  for (const auto& grp : groups_) {
    state_.metrics.reset_checks++;
    if (state_.values[grp.reset_node].is_zero()) continue;
    for (const auto& [write_id, init] : grp.members) {
      const RtlNode& w = g_->node(write_id);
      if (w.alive) state_.values[w.pair] = init->cval;
    }
  }
  state_.cycle++;
  state_.metrics.cycles++;
  state_.metrics.af_accum += 1.0;
}

}  // namespace actsim
