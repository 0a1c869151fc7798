#pragma once
// Line-oriented testbench scripts:
//   poke <signal> <uint>
//   step <n>
//   expect <signal> <uint>
//   reset <n>        assert all reset inputs for n cycles
//   # comment

#include <functional>
#include <string>

#include "actsim/engine.hpp"

namespace actsim {

struct TbResult {
  int exit_code = 0;  // 0 pass, 1 expect failure, 2 parse/signal error
  std::string message;
  uint64_t steps = 0;
};

// `on_step` (when set) runs after every simulated cycle (VCD sampling,
// lockstep comparison).
TbResult run_testbench(SimDriver& sim, const std::string& script,
                       const std::function<void()>& on_step = {});

}  // namespace actsim
