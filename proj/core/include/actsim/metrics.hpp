#pragma once
// Measured counters behind the per-cycle overhead model
// T = ((E + A_succ) * af + A_exam) * N.

#include <cstdint>
#include <map>
#include <vector>

namespace actsim {

struct MetricCounters {
  uint64_t cycles = 0;
  uint64_t evaluated_nodes = 0;  // E proxy: node evaluations executed
  uint64_t activations = 0;      // A_succ proxy: activation operations
  uint64_t examinations = 0;     // A_exam proxy: active word/bit tests
  uint64_t reset_checks = 0;     // reset-condition evaluations
  double af_accum = 0.0;         // sum over cycles of active_nodes / N
  std::vector<uint64_t> supernode_evals;       // per supernode
  std::map<uint64_t, uint64_t> active_histogram;  // active nodes -> cycle count

  double af_mean() const { return cycles ? af_accum / (double)cycles : 0.0; }

  void reset() {
    cycles = evaluated_nodes = activations = examinations = reset_checks = 0;
    af_accum = 0.0;
    for (auto& v : supernode_evals) v = 0;
    active_histogram.clear();
  }
};

}  // namespace actsim
