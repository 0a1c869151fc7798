#include "actsim/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace actsim {

const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Input: return "input";
    case NodeKind::Output: return "output";
    case NodeKind::Wire: return "wire";
    case NodeKind::RegisterRead: return "regread";
    case NodeKind::RegisterWrite: return "regwrite";
    case NodeKind::MemRead: return "memread";
    case NodeKind::MemWrite: return "memwrite";
  }
  return "?";
}

uint32_t RtlGraph::add_node(NodeKind kind, std::string name, uint32_t width,
                            bool sign, ExprRef expr) {
  RtlNode n;
  n.id = (uint32_t)nodes.size();
  n.kind = kind;
  n.name = std::move(name);
  n.width = width;
  n.sign = sign;
  n.expr = std::move(expr);
  nodes.push_back(std::move(n));
  return nodes.back().id;
}

size_t RtlGraph::alive_count() const {
  size_t n = 0;
  for (const auto& x : nodes) n += x.alive ? 1 : 0;
  return n;
}

std::vector<uint32_t> RtlGraph::alive_ids() const {
  std::vector<uint32_t> ids;
  ids.reserve(nodes.size());
  for (const auto& x : nodes)
    if (x.alive) ids.push_back(x.id);
  return ids;
}

Adjacency RtlGraph::build_adjacency() const {
  Adjacency adj;
  adj.succs.resize(nodes.size());
  adj.preds.resize(nodes.size());
  for (const auto& n : nodes) {
    if (!n.alive || !n.expr) continue;
    for_each_ref(*n.expr, [&](const Expr& r) {
      adj.preds[n.id].push_back(r.node);
      adj.succs[r.node].push_back(n.id);
    });
  }
  for (auto& v : adj.succs) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (auto& v : adj.preds) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return adj;
}

std::vector<uint32_t> RtlGraph::topo_order() const {
  Adjacency adj = build_adjacency();
  std::vector<uint32_t> indeg(nodes.size(), 0);
  std::vector<uint32_t> order;
  order.reserve(nodes.size());
  std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<>> ready;
  size_t alive = 0;
  for (const auto& n : nodes) {
    if (!n.alive) continue;
    alive++;
    indeg[n.id] = (uint32_t)adj.preds[n.id].size();
    if (indeg[n.id] == 0) ready.push(n.id);
  }
  while (!ready.empty()) {
    uint32_t u = ready.top();
    ready.pop();
    order.push_back(u);
    for (uint32_t v : adj.succs[u]) {
      if (--indeg[v] == 0) ready.push(v);
    }
  }
  if (order.size() != alive) {
    // Extract one combinational cycle for the diagnostic.
    std::vector<uint32_t> stuck;
    for (const auto& n : nodes)
      if (n.alive && indeg[n.id] > 0) stuck.push_back(n.id);
    std::vector<std::string> names;
    if (!stuck.empty()) {
      // Walk predecessors among stuck nodes until we revisit one.
      std::vector<int> seen(nodes.size(), -1);
      std::vector<uint32_t> path;
      uint32_t cur = stuck.front();
      while (seen[cur] < 0) {
        seen[cur] = (int)path.size();
        path.push_back(cur);
        uint32_t next = kNoNode;
        for (uint32_t p : adj.preds[cur]) {
          if (nodes[p].alive && indeg[p] > 0) {
            next = p;
            break;
          }
        }
        cur = next;
      }
      for (size_t i = seen[cur]; i < path.size(); i++)
        names.push_back(nodes[path[i]].name);
      std::reverse(names.begin(), names.end());
    }
    std::ostringstream msg;
    msg << "combinational loop:";
    for (const auto& s : names) msg << " " << s;
    throw CycleError(msg.str(), names);
  }
  return order;
}

uint32_t RtlGraph::find_by_name(const std::string& name) const {
  for (const auto& n : nodes)
    if (n.alive && n.name == name) return n.id;
  return kNoNode;
}

std::string RtlGraph::dump() const {
  Adjacency adj = build_adjacency();
  std::ostringstream os;
  for (const auto& n : nodes) {
    if (!n.alive) continue;
    os << n.id << " " << node_kind_name(n.kind) << " " << n.width << " ";
    os << (n.expr ? expr_to_string(*n.expr) : "-");
    os << " succ=[";
    for (size_t i = 0; i < adj.succs[n.id].size(); i++) {
      if (i) os << ",";
      os << adj.succs[n.id][i];
    }
    os << "]\n";
  }
  return os.str();
}

}  // namespace actsim
