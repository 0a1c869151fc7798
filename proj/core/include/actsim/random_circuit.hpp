#pragma once
// Deterministic random circuit and stimulus generation for differential
// testing.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "actsim/graph.hpp"
#include "actsim/wide_value.hpp"

namespace actsim {

struct RandomCircuitParams {
  uint32_t nodes = 60;     // combinational node declarations
  uint32_t inputs = 4;
  uint32_t outputs = 3;
  uint32_t regs = 6;
  uint32_t max_width = 65;
  bool with_reset = true;  // roughly half the registers reset via a shared rst
  uint32_t mems = 0;
  bool use_when = true;
};

// Same seed and params always produce byte-identical FIRRTL text.
std::string random_circuit(uint64_t seed, const RandomCircuitParams& p);

// Per-cycle input assignments (input name, value), deterministic per seed.
using Stimulus = std::vector<std::vector<std::pair<std::string, WideValue>>>;
Stimulus random_stimulus(uint64_t seed, const RtlGraph& g, uint64_t cycles);

}  // namespace actsim
