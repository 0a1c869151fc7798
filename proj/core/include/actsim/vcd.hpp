#pragma once
// Value Change Dump output: $timescale 1ns, one timestep per cycle,
// identifiers assigned in node-id order.

#include <ostream>
#include <string>
#include <vector>

#include "actsim/engine.hpp"

namespace actsim {

class VcdWriter {
public:
  VcdWriter(std::ostream& os, const RtlGraph& g, const std::string& top_name);

  // Emits a timestep; only changed signals are written after the first.
  void sample(const SimDriver& sim);

private:
  std::ostream& os_;
  struct Var {
    uint32_t node;
    std::string id;
  };
  std::vector<Var> vars_;
  std::vector<WideValue> last_;
  uint64_t samples_ = 0;
};

}  // namespace actsim
