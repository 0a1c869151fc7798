#pragma once
// RtlGraph: the substrate every pass and both engines operate on.
// Nodes keep stable ids for the whole pipeline; removals mark `alive = false`.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "actsim/expr.hpp"

namespace actsim {

constexpr uint32_t kNoNode = ~uint32_t{0};

enum class NodeKind : uint8_t {
  Input,
  Output,
  Wire,
  RegisterRead,
  RegisterWrite,
  MemRead,
  MemWrite,
};

const char* node_kind_name(NodeKind k);

struct ResetInfo {
  uint32_t reset_node = kNoNode;
  ExprRef init;  // constant after lowering
};

struct RtlNode {
  uint32_t id = kNoNode;
  NodeKind kind = NodeKind::Wire;
  uint32_t width = 0;
  bool sign = false;
  bool alive = true;
  std::string name;
  ExprRef expr;  // null for Input and RegisterRead
  std::optional<ResetInfo> reset;  // RegisterWrite only
  uint32_t pair = kNoNode;         // RegisterRead <-> RegisterWrite link
  uint32_t mem = kNoNode;          // MemRead/MemWrite: memory id

  bool is_source() const {
    return kind == NodeKind::Input || kind == NodeKind::RegisterRead;
  }
  bool is_sink() const {
    return kind == NodeKind::Output || kind == NodeKind::RegisterWrite ||
           kind == NodeKind::MemWrite;
  }
};

struct MemDesc {
  std::string name;
  uint32_t data_width = 0;
  bool sign = false;
  uint32_t depth = 0;
  uint32_t addr_width = 0;
  std::vector<uint32_t> read_ports;   // MemRead node ids
  std::vector<uint32_t> write_ports;  // MemWrite node ids

  // MemWrite nodes pack (addr, en, data) into one value: cat(addr, cat(en, data)).
  uint32_t write_pack_width() const { return addr_width + 1 + data_width; }
};

struct CycleError : std::runtime_error {
  explicit CycleError(std::string msg, std::vector<std::string> cycle_names)
      : std::runtime_error(std::move(msg)), cycle(std::move(cycle_names)) {}
  std::vector<std::string> cycle;
};

struct Adjacency {
  std::vector<std::vector<uint32_t>> succs;
  std::vector<std::vector<uint32_t>> preds;
};

class RtlGraph {
public:
  std::vector<RtlNode> nodes;
  std::vector<MemDesc> mems;

  uint32_t add_node(NodeKind kind, std::string name, uint32_t width, bool sign,
                    ExprRef expr = nullptr);

  RtlNode& node(uint32_t id) { return nodes[id]; }
  const RtlNode& node(uint32_t id) const { return nodes[id]; }

  size_t alive_count() const;
  std::vector<uint32_t> alive_ids() const;

  // Combinational edges only: (u, v) iff v.expr references u. Sorted, deduped.
  Adjacency build_adjacency() const;

  // Positions respect every combinational edge; ties broken by node id.
  // Throws CycleError naming the nodes on a combinational cycle.
  std::vector<uint32_t> topo_order() const;

  uint32_t find_by_name(const std::string& name) const;  // kNoNode if absent

  std::string dump() const;
};

}  // namespace actsim
