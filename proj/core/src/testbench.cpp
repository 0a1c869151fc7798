#include "actsim/testbench.hpp"

#include <sstream>

namespace actsim {

namespace {

bool parse_value(const std::string& tok, uint32_t width, WideValue& out) {
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    out.reset(width);
    for (size_t i = 2; i < tok.size(); i++) {
      char c = tok[i];
      uint32_t d;
      if (c >= '0' && c <= '9')
        d = c - '0';
      else if (c >= 'a' && c <= 'f')
        d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F')
        d = c - 'A' + 10;
      else
        return false;
      // out = out << 4 | d with overflow check
      for (uint32_t k = out.num_words(); k-- > 0;) {
        uint64_t v = out.data()[k];
        if (k + 1 < out.num_words())
          out.data()[k + 1] |= v >> 60;
        else if ((v >> 60) != 0)
          return false;
        out.data()[k] = v << 4;
      }
      out.data()[0] |= d;
      WideValue canon = out;
      canon.mask_top();
      if (canon != out) return false;
    }
    return true;
  }
  return WideValue::from_decimal(width, tok, out);
}

}  // namespace

TbResult run_testbench(SimDriver& sim, const std::string& script,
                       const std::function<void()>& on_step) {
  TbResult res;
  std::istringstream in(script);
  std::string line;
  uint32_t lineno = 0;

  auto fail = [&](int code, const std::string& msg) {
    res.exit_code = code;
    res.message = "tb:" + std::to_string(lineno) + ": " + msg;
    return res;
  };
  auto do_step = [&](uint64_t n) {
    for (uint64_t i = 0; i < n; i++) {
      sim.step(1);
      res.steps++;
      if (on_step) on_step();
    }
  };

  while (std::getline(in, line)) {
    lineno++;
    std::istringstream ls(line);
    std::string cmd;
    if (!(ls >> cmd)) continue;
    if (cmd[0] == '#') continue;

    if (cmd == "poke" || cmd == "expect") {
      std::string sig, val;
      if (!(ls >> sig >> val))
        return fail(2, "expected '<signal> <value>' after " + cmd);
      uint32_t id = sim.graph().find_by_name(sig);
      if (id == kNoNode) return fail(2, "unknown signal '" + sig + "'");
      uint32_t width = sim.graph().node(id).width;
      WideValue v;
      if (!parse_value(val, width, v))
        return fail(2, "value '" + val + "' does not fit " + sig + " (width " +
                           std::to_string(width) + ")");
      if (cmd == "poke") {
        try {
          sim.poke(sig, v);
        } catch (const SimError& e) {
          return fail(2, e.what());
        }
      } else {
        WideValue actual = sim.peek(sig);
        if (actual != v) {
          return fail(1, "expect failed at cycle " +
                             std::to_string(sim.cycle()) + ": signal " + sig +
                             " expected " + v.to_decimal() + " actual " +
                             actual.to_decimal());
        }
      }
    } else if (cmd == "step") {
      uint64_t n = 0;
      if (!(ls >> n)) return fail(2, "expected cycle count after step");
      do_step(n);
    } else if (cmd == "reset") {
      uint64_t n = 0;
      if (!(ls >> n)) return fail(2, "expected cycle count after reset");
      auto resets = sim.reset_input_names();
      for (const auto& r : resets) sim.poke(r, WideValue::from_u64(1, 1));
      do_step(n);
      for (const auto& r : resets) sim.poke(r, WideValue::from_u64(1, 0));
    } else {
      return fail(2, "unknown command '" + cmd + "'");
    }
  }
  return res;
}

}  // namespace actsim
