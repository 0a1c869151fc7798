#include "actsim/random_circuit.hpp"

#include <random>
#include <sstream>

namespace actsim {

namespace {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(uint64_t seed) : g(seed) {}
  uint64_t pick(uint64_t n) { return n ? g() % n : 0; }
  bool chance(uint32_t percent) { return pick(100) < percent; }
};

struct Sig {
  std::string name;
  uint32_t width;
};

struct GenExpr {
  std::string text;
  uint32_t width;
};

class Gen {
public:
  Gen(uint64_t seed, const RandomCircuitParams& p) : rng_(seed), p_(p) {}

  std::string run(uint64_t seed) {
    std::ostringstream os;
    std::string name = "R" + std::to_string(seed);
    os << "circuit " << name << " :\n";
    os << "  module " << name << " :\n";
    os << "    input clock : Clock\n";
    if (p_.with_reset) os << "    input rst : UInt<1>\n";
    for (uint32_t i = 0; i < p_.inputs; i++) {
      uint32_t w = i == 0 ? p_.max_width : rand_width();
      os << "    input in" << i << " : UInt<" << w << ">\n";
      avail_.push_back({"in" + std::to_string(i), w});
    }
    std::vector<uint32_t> out_widths;
    for (uint32_t i = 0; i < p_.outputs; i++) {
      uint32_t w = rand_width();
      out_widths.push_back(w);
      os << "    output out" << i << " : UInt<" << w << ">\n";
    }

    std::vector<Sig> regs;
    for (uint32_t i = 0; i < p_.regs; i++) {
      uint32_t w = rand_width();
      Sig r{"r" + std::to_string(i), w};
      os << "    reg " << r.name << " : UInt<" << w << ">, clock";
      if (p_.with_reset && rng_.chance(50)) {
        os << " with : (reset => (rst, " << literal(w).text << "))";
      }
      os << "\n";
      regs.push_back(r);
      avail_.push_back(r);
    }

    struct MemInfo {
      std::string name;
      uint32_t dw, aw, readers;
    };
    std::vector<MemInfo> mems;
    for (uint32_t i = 0; i < p_.mems; i++) {
      uint32_t dw = 4 + (uint32_t)rng_.pick(13);
      uint32_t depth = rng_.chance(50) ? 8 : 16;
      uint32_t aw = depth == 8 ? 3 : 4;
      uint32_t readers = 1 + (uint32_t)rng_.pick(2);
      std::string mn = "m" + std::to_string(i);
      os << "    mem " << mn << " :\n";
      os << "      data-type => UInt<" << dw << ">\n";
      os << "      depth => " << depth << "\n";
      os << "      read-latency => 0\n";
      os << "      write-latency => 1\n";
      for (uint32_t r = 0; r < readers; r++) os << "      reader => rp" << r << "\n";
      os << "      writer => wp0\n";
      mems.push_back({mn, dw, aw, readers});
      for (uint32_t r = 0; r < readers; r++)
        avail_.push_back({mn + ".rp" + std::to_string(r) + ".data", dw});
    }

    for (uint32_t i = 0; i < p_.nodes; i++) {
      GenExpr e = expr(2);
      os << "    node n" << i << " = " << e.text << "\n";
      avail_.push_back({"n" + std::to_string(i), e.width});
    }

    // A few wires driven through `when` blocks.
    uint32_t wires = p_.use_when ? 1 + p_.nodes / 12 : 0;
    for (uint32_t i = 0; i < wires; i++) {
      uint32_t w = rand_width();
      std::string wn = "w" + std::to_string(i);
      os << "    wire " << wn << " : UInt<" << w << ">\n";
      GenExpr cond = bool_expr();
      if (rng_.chance(50)) {
        os << "    " << wn << " <= " << fit(expr(1), w) << "\n";
        os << "    when " << cond.text << " : " << wn << " <= " << fit(expr(1), w)
           << "\n";
      } else {
        os << "    when " << cond.text << " :\n";
        os << "      " << wn << " <= " << fit(expr(1), w) << "\n";
        os << "    else :\n";
        os << "      " << wn << " <= " << fit(expr(1), w) << "\n";
      }
      avail_.push_back({wn, w});
    }

    for (const auto& r : regs) {
      if (p_.use_when && rng_.chance(30)) {
        GenExpr en = bool_expr();
        os << "    when " << en.text << " : " << r.name << " <= "
           << fit(expr(2), r.width) << "\n";
      } else {
        os << "    " << r.name << " <= " << fit(expr(2), r.width) << "\n";
      }
    }

    for (const auto& m : mems) {
      for (uint32_t r = 0; r < m.readers; r++) {
        std::string port = m.name + ".rp" + std::to_string(r);
        os << "    " << port << ".addr <= " << fit(expr(1), m.aw) << "\n";
        os << "    " << port << ".en <= " << bool_expr().text << "\n";
      }
      os << "    " << m.name << ".wp0.addr <= " << fit(expr(1), m.aw) << "\n";
      os << "    " << m.name << ".wp0.en <= " << bool_expr().text << "\n";
      os << "    " << m.name << ".wp0.data <= " << fit(expr(1), m.dw) << "\n";
      os << "    " << m.name << ".wp0.mask <= UInt<1>(1)\n";
    }

    for (uint32_t i = 0; i < p_.outputs; i++)
      os << "    out" << i << " <= " << fit(expr(2), out_widths[i]) << "\n";
    return os.str();
  }

private:
  uint32_t rand_width() {
    // Bias toward narrow signals, keep some multi-word ones.
    uint32_t r = (uint32_t)rng_.pick(100);
    if (r < 50) return 1 + (uint32_t)rng_.pick(8);
    if (r < 85) return 9 + (uint32_t)rng_.pick(24);
    return std::min(p_.max_width, 60 + (uint32_t)rng_.pick(10));
  }

  GenExpr literal(uint32_t w) {
    WideValue v(w);
    for (uint32_t i = 0; i < v.num_words(); i++) v.data()[i] = rng_.g();
    v.mask_top();
    return {"UInt<" + std::to_string(w) + ">(\"h" + v.to_hex() + "\")", w};
  }

  GenExpr ref() {
    const Sig& s = avail_[rng_.pick(avail_.size())];
    return {s.name, s.width};
  }

  std::string fit(const GenExpr& e, uint32_t w) {
    if (e.width == w) return e.text;
    if (e.width > w) {
      if (rng_.chance(30))
        return "tail(" + e.text + ", " + std::to_string(e.width - w) + ")";
      return "bits(" + e.text + ", " + std::to_string(w - 1) + ", 0)";
    }
    return "pad(" + e.text + ", " + std::to_string(w) + ")";
  }

  GenExpr bool_expr() {
    GenExpr a = expr(1);
    switch (rng_.pick(4)) {
      case 0: {
        GenExpr b = expr(1);
        return {"lt(" + fit(a, 8) + ", " + fit(b, 8) + ")", 1};
      }
      case 1:
        return {"orr(" + a.text + ")", 1};
      case 2:
        return {"bits(" + a.text + ", 0, 0)", 1};
      default: {
        GenExpr b = expr(1);
        return {"eq(" + fit(a, 6) + ", " + fit(b, 6) + ")", 1};
      }
    }
  }

  // Caps intermediate growth so dshl/cat/mul chains stay within bounds.
  GenExpr clamp(GenExpr e) {
    uint32_t cap = std::max(p_.max_width, 65u);
    if (e.width > cap)
      return {"bits(" + e.text + ", " + std::to_string(cap - 1) + ", 0)", cap};
    return e;
  }

  GenExpr expr(int depth) {
    if (depth <= 0 || rng_.chance(35)) {
      if (rng_.chance(20)) return literal(rand_width());
      return ref();
    }
    switch (rng_.pick(20)) {
      case 0: return binary("add", depth);
      case 1: return binary("sub", depth);
      case 2: {
        GenExpr a = expr(depth - 1), b = expr(depth - 1);
        GenExpr am = clampw(a, 20), bm = clampw(b, 20);
        return clamp({"mul(" + am.text + ", " + bm.text + ")", am.width + bm.width});
      }
      case 3: return binary("div", depth);
      case 4: return binary("rem", depth, true);
      case 5: {
        const char* ops[] = {"lt", "leq", "gt", "geq", "eq", "neq"};
        const char* op = ops[rng_.pick(6)];
        GenExpr a = expr(depth - 1), b = expr(depth - 1);
        return {std::string(op) + "(" + a.text + ", " + b.text + ")", 1};
      }
      case 6: return binary("and", depth);
      case 7: return binary("or", depth);
      case 8: return binary("xor", depth);
      case 9: {
        GenExpr a = expr(depth - 1);
        return {"not(" + a.text + ")", a.width};
      }
      case 10: {
        const char* ops[] = {"andr", "orr", "xorr"};
        GenExpr a = expr(depth - 1);
        return {std::string(ops[rng_.pick(3)]) + "(" + a.text + ")", 1};
      }
      case 11: {
        GenExpr a = expr(depth - 1);
        uint32_t n = (uint32_t)rng_.pick(8);
        return clamp({"shl(" + a.text + ", " + std::to_string(n) + ")", a.width + n});
      }
      case 12: {
        GenExpr a = expr(depth - 1);
        uint32_t n = (uint32_t)rng_.pick(a.width + 2);
        uint32_t w = a.width > n ? a.width - n : 1;
        return {"shr(" + a.text + ", " + std::to_string(n) + ")", w};
      }
      case 13: {
        GenExpr a = expr(depth - 1), b = expr(depth - 1);
        GenExpr bs = clampw(b, 3);
        return clamp({"dshl(" + a.text + ", " + bs.text + ")",
                      a.width + (1u << bs.width) - 1});
      }
      case 14: {
        GenExpr a = expr(depth - 1), b = expr(depth - 1);
        GenExpr bs = clampw(b, 6);
        return {"dshr(" + a.text + ", " + bs.text + ")", a.width};
      }
      case 15: {
        GenExpr a = expr(depth - 1), b = expr(depth - 1);
        return clamp({"cat(" + a.text + ", " + b.text + ")", a.width + b.width});
      }
      case 16: {
        GenExpr a = expr(depth - 1);
        uint32_t hi = (uint32_t)rng_.pick(a.width);
        uint32_t lo = (uint32_t)rng_.pick(hi + 1);
        return {"bits(" + a.text + ", " + std::to_string(hi) + ", " +
                    std::to_string(lo) + ")",
                hi - lo + 1};
      }
      case 17: {
        GenExpr c = bool_expr();
        GenExpr a = expr(depth - 1), b = expr(depth - 1);
        return {"mux(" + c.text + ", " + a.text + ", " + b.text + ")",
                std::max(a.width, b.width)};
      }
      case 18: {
        // Signed arithmetic round-trip.
        GenExpr a = expr(depth - 1), b = expr(depth - 1);
        const char* ops[] = {"add", "sub", "mul", "div"};
        const char* op = ops[rng_.pick(4)];
        GenExpr am = clampw(a, 16), bm = clampw(b, 16);
        uint32_t w;
        if (op[0] == 'm')
          w = am.width + bm.width;
        else if (op[0] == 'd')
          w = am.width + 1;
        else
          w = std::max(am.width, bm.width) + 1;
        return {"asUInt(" + std::string(op) + "(asSInt(" + am.text + "), asSInt(" +
                    bm.text + ")))",
                w};
      }
      default: {
        GenExpr a = expr(depth - 1);
        uint32_t n = a.width + (uint32_t)rng_.pick(8);
        return {"pad(" + a.text + ", " + std::to_string(n) + ")",
                std::max(a.width, n)};
      }
    }
  }

  GenExpr binary(const std::string& op, int depth, bool min_width = false) {
    GenExpr a = expr(depth - 1), b = expr(depth - 1);
    uint32_t w;
    if (op == "add" || op == "sub")
      w = std::max(a.width, b.width) + 1;
    else if (op == "div")
      w = a.width;
    else if (min_width)
      w = std::min(a.width, b.width);
    else
      w = std::max(a.width, b.width);
    return clamp({op + "(" + a.text + ", " + b.text + ")", w});
  }

  GenExpr clampw(const GenExpr& e, uint32_t w) {
    if (e.width <= w) return e;
    return {"bits(" + e.text + ", " + std::to_string(w - 1) + ", 0)", w};
  }

  Rng rng_;
  RandomCircuitParams p_;
  std::vector<Sig> avail_;
};

}  // namespace

std::string random_circuit(uint64_t seed, const RandomCircuitParams& p) {
  Gen gen(seed ^ 0x9e3779b97f4a7c15ull, p);
  return gen.run(seed);
}

Stimulus random_stimulus(uint64_t seed, const RtlGraph& g, uint64_t cycles) {
  Rng rng(seed * 0x100000001b3ull + 0xcbf29ce484222325ull);
  std::vector<const RtlNode*> inputs;
  for (const auto& n : g.nodes)
    if (n.alive && n.kind == NodeKind::Input) inputs.push_back(&n);
  Stimulus st(cycles);
  if (inputs.empty()) return st;
  for (uint64_t c = 0; c < cycles; c++) {
    if (!rng.chance(40)) continue;
    uint64_t count = 1 + rng.pick(std::min<uint64_t>(3, inputs.size()));
    for (uint64_t k = 0; k < count; k++) {
      const RtlNode* in = inputs[rng.pick(inputs.size())];
      WideValue v(in->width);
      for (uint32_t i = 0; i < v.num_words(); i++) v.data()[i] = rng.g();
      v.mask_top();
      st[c].emplace_back(in->name, std::move(v));
    }
  }
  return st;
}

}  // namespace actsim
