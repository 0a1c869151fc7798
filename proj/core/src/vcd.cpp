#include "actsim/vcd.hpp"

namespace actsim {

namespace {

std::string vcd_id(uint32_t k) {
  // Printable identifier alphabet '!'..'~'.
  std::string s;
  do {
    s.push_back(char('!' + k % 94));
    k /= 94;
  } while (k);
  return s;
}

bool dumpable(const RtlNode& n) {
  if (!n.alive) return false;
  switch (n.kind) {
    case NodeKind::Input:
    case NodeKind::Output:
    case NodeKind::Wire:
    case NodeKind::RegisterRead:
    case NodeKind::MemRead:
      return true;
    default:
      return false;  // write-side bookkeeping nodes are not signals
  }
}

}  // namespace

VcdWriter::VcdWriter(std::ostream& os, const RtlGraph& g,
                     const std::string& top_name)
    : os_(os) {
  os_ << "$timescale 1ns $end\n";
  os_ << "$scope module " << top_name << " $end\n";
  uint32_t k = 0;
  for (const auto& n : g.nodes) {
    if (!dumpable(n)) continue;
    Var v{n.id, vcd_id(k++)};
    os_ << "$var wire " << n.width << " " << v.id << " " << n.name << " $end\n";
    vars_.push_back(std::move(v));
  }
  os_ << "$upscope $end\n$enddefinitions $end\n";
  last_.resize(g.nodes.size());
}

void VcdWriter::sample(const SimDriver& sim) {
  os_ << "#" << samples_ << "\n";
  if (samples_ == 0) os_ << "$dumpvars\n";
  for (const auto& v : vars_) {
    const WideValue& cur = sim.value_of(v.node);
    if (samples_ != 0 && cur == last_[v.node]) continue;
    if (cur.width() == 1)
      os_ << (cur.is_zero() ? "0" : "1") << v.id << "\n";
    else
      os_ << "b" << cur.to_bin() << " " << v.id << "\n";
    last_[v.node] = cur;
  }
  if (samples_ == 0) os_ << "$end\n";
  samples_++;
}

}  // namespace actsim
