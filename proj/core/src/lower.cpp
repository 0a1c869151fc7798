#include "actsim/lower.hpp"

#include <cmath>
#include <map>
#include <set>

#include "actsim/eval.hpp"

namespace actsim {

namespace {

uint32_t addr_width_for(uint32_t depth) {
  uint32_t w = 0;
  while ((uint64_t{1} << w) < depth) w++;
  return w == 0 ? 1 : w;
}

struct MemPortConn {
  ExprRef addr, en, data, mask;
  SourceLoc loc;
};

class LowerCtx {
public:
  LowerCtx(const ModuleDecl& m, DiagEngine& diags, const LowerOptions& opts)
      : mod_(m), diags_(diags), opts_(opts) {}

  RtlGraph run() {
    declare_all();
    resolve_connects();
    finalize_mems();
    check_connected();
    check_loops();
    return std::move(g_);
  }

private:
  enum class Sym : uint8_t { Input, Output, Wire, Reg, Mem, ClockSig };

  struct Entry {
    Sym sym;
    uint32_t node = kNoNode;   // value-carrying node (read node for regs)
    uint32_t write = kNoNode;  // RegisterWrite for regs
    uint32_t mem = kNoNode;
    SourceLoc loc;
  };

  void declare(const std::string& name, Entry e) {
    if (symbols_.count(name))
      diags_.error(e.loc, "duplicate declaration of '" + name + "'");
    symbols_[name] = e;
  }

  void declare_all() {
    for (const auto& p : mod_.ports) {
      if (p.type.kind == GroundType::Clock) {
        if (!p.is_input) diags_.error(p.loc, "output Clock port unsupported");
        declare(p.name, {Sym::ClockSig, kNoNode, kNoNode, kNoNode, p.loc});
        continue;
      }
      check_width(p.type.width, p.loc);
      bool sign = p.type.kind == GroundType::SInt;
      if (p.is_input) {
        uint32_t id = g_.add_node(NodeKind::Input, p.name, p.type.width, sign);
        declare(p.name, {Sym::Input, id, kNoNode, kNoNode, p.loc});
      } else {
        uint32_t id = g_.add_node(NodeKind::Output, p.name, p.type.width, sign);
        declare(p.name, {Sym::Output, id, kNoNode, kNoNode, p.loc});
      }
    }
    for (const auto& s : mod_.body) {
      switch (s.kind) {
        case AstStmt::Kind::Wire: {
          if (s.type.kind == GroundType::Clock) {
            declare(s.name, {Sym::ClockSig, kNoNode, kNoNode, kNoNode, s.loc});
            break;
          }
          check_width(s.type.width, s.loc);
          uint32_t id = g_.add_node(NodeKind::Wire, s.name, s.type.width,
                                    s.type.kind == GroundType::SInt);
          declare(s.name, {Sym::Wire, id, kNoNode, kNoNode, s.loc});
          break;
        }
        case AstStmt::Kind::Node: {
          // Width comes from the bound expression, filled in later.
          uint32_t id = g_.add_node(NodeKind::Wire, s.name, 0, false);
          declare(s.name, {Sym::Wire, id, kNoNode, kNoNode, s.loc});
          node_decls_.push_back(&s);
          break;
        }
        case AstStmt::Kind::Reg: {
          check_width(s.type.width, s.loc);
          bool sign = s.type.kind == GroundType::SInt;
          uint32_t rd = g_.add_node(NodeKind::RegisterRead, s.name, s.type.width, sign);
          uint32_t wr = g_.add_node(NodeKind::RegisterWrite, s.name + "$next",
                                    s.type.width, sign);
          g_.node(rd).pair = wr;
          g_.node(wr).pair = rd;
          declare(s.name, {Sym::Reg, rd, wr, kNoNode, s.loc});
          reg_decls_.push_back(&s);
          break;
        }
        case AstStmt::Kind::Mem: {
          check_width(s.mem.data_type.width, s.loc);
          MemDesc d;
          d.name = s.name;
          d.data_width = s.mem.data_type.width;
          d.sign = s.mem.data_type.kind == GroundType::SInt;
          d.depth = s.mem.depth;
          d.addr_width = addr_width_for(s.mem.depth);
          uint32_t mem_id = (uint32_t)g_.mems.size();
          for (const auto& r : s.mem.readers) {
            uint32_t id = g_.add_node(NodeKind::MemRead, s.name + "." + r + ".data",
                                      d.data_width, d.sign);
            g_.node(id).mem = mem_id;
            d.read_ports.push_back(id);
            mem_ports_[s.name + "." + r] = {};
            mem_ports_[s.name + "." + r].loc = s.loc;
            port_node_[s.name + "." + r] = id;
          }
          for (const auto& w : s.mem.writers) {
            uint32_t id = g_.add_node(NodeKind::MemWrite, s.name + "." + w,
                                      d.write_pack_width(), false);
            g_.node(id).mem = mem_id;
            d.write_ports.push_back(id);
            mem_ports_[s.name + "." + w] = {};
            mem_ports_[s.name + "." + w].loc = s.loc;
            port_node_[s.name + "." + w] = id;
          }
          g_.mems.push_back(std::move(d));
          declare(s.name, {Sym::Mem, kNoNode, kNoNode, mem_id, s.loc});
          break;
        }
        case AstStmt::Kind::Inst:
          diags_.error(s.loc, "instance statement survived flattening");
          break;
        case AstStmt::Kind::Connect:
          break;
      }
    }
    // Bind node-decl expressions now that every name resolves.
    for (const AstStmt* s : node_decls_) {
      ExprRef e = convert(*s->expr);
      RtlNode& n = g_.node(symbols_[s->name].node);
      n.width = e->width;
      n.sign = e->sign;
      n.expr = std::move(e);
    }
  }

  void check_width(uint32_t w, SourceLoc loc) {
    if (w > opts_.max_width)
      diags_.error(loc, "signal width " + std::to_string(w) +
                            " exceeds the configured cap of " +
                            std::to_string(opts_.max_width));
  }

  ExprRef convert(const AstExpr& e) {
    switch (e.kind) {
      case AstExpr::Kind::Hole:
        diags_.error(e.loc, "signal '" + e.name + "' is not fully connected");
      case AstExpr::Kind::Lit:
        return mk_const(e.value, e.type.kind == GroundType::SInt);
      case AstExpr::Kind::Ref:
        return convert_ref(e);
      case AstExpr::Kind::Mux: {
        ExprRef c = convert(*e.args[0]);
        ExprRef a = convert(*e.args[1]);
        ExprRef b = convert(*e.args[2]);
        return build_op(Op::Mux, {c, a, b}, 0, 0, e.loc);
      }
      case AstExpr::Kind::Prim:
        return convert_prim(e);
    }
    diags_.error(e.loc, "malformed expression");
  }

  ExprRef convert_ref(const AstExpr& e) {
    size_t dot = e.name.find('.');
    std::string head = dot == std::string::npos ? e.name : e.name.substr(0, dot);
    auto it = symbols_.find(head);
    if (it == symbols_.end())
      diags_.error(e.loc, "undeclared identifier '" + head + "'");
    const Entry& ent = it->second;
    if (ent.sym == Sym::ClockSig)
      diags_.error(e.loc, "clock signal '" + e.name + "' used as a value");
    if (ent.sym == Sym::Mem) {
      // Must be m.<port>.data of a read port.
      auto pn = port_node_.find(e.name.substr(0, e.name.rfind('.')));
      if (dot == std::string::npos || e.name.substr(e.name.rfind('.') + 1) != "data" ||
          pn == port_node_.end() ||
          g_.node(pn->second).kind != NodeKind::MemRead)
        diags_.error(e.loc, "only read-port '.data' of a memory can be read");
      const RtlNode& n = g_.node(pn->second);
      return mk_ref(n.id, n.width, n.sign);
    }
    if (dot != std::string::npos)
      diags_.error(e.loc, "'" + head + "' has no members");
    if (ent.sym == Sym::Output)
      diags_.error(e.loc, "reading an output port is unsupported");
    const RtlNode& n = g_.node(ent.node);
    if (n.width == 0)
      diags_.error(e.loc, "use of '" + head + "' before its definition");
    return mk_ref(n.id, n.width, n.sign);
  }

  ExprRef build_op(Op op, std::vector<ExprRef> kids, uint32_t a0, uint32_t a1,
                   SourceLoc loc) {
    std::string err;
    auto sig = infer_sig(op, kids, a0, a1, &err);
    if (!sig) diags_.error(loc, err);
    check_width(sig->width, loc);
    return mk_op(op, std::move(kids), a0, a1);
  }

  ExprRef convert_prim(const AstExpr& e) {
    static const std::map<std::string, Op> unary = {
        {"not", Op::Not},   {"andr", Op::AndR}, {"orr", Op::OrR},
        {"xorr", Op::XorR}, {"cvt", Op::Cvt},   {"asUInt", Op::AsUInt},
        {"asSInt", Op::AsSInt}};
    static const std::map<std::string, Op> binary = {
        {"add", Op::Add}, {"sub", Op::Sub}, {"mul", Op::Mul}, {"div", Op::Div},
        {"rem", Op::Rem}, {"lt", Op::Lt},   {"leq", Op::Leq}, {"gt", Op::Gt},
        {"geq", Op::Geq}, {"eq", Op::Eq},   {"neq", Op::Neq}, {"and", Op::And},
        {"or", Op::Or},   {"xor", Op::Xor}, {"dshl", Op::Dshl},
        {"dshr", Op::Dshr}, {"cat", Op::Cat}};

    auto args_exactly = [&](size_t nexpr, size_t nint) {
      if (e.args.size() != nexpr || e.int_args.size() != nint)
        diags_.error(e.loc, "wrong argument count for '" + e.prim + "'");
    };

    if (auto it = unary.find(e.prim); it != unary.end()) {
      args_exactly(1, 0);
      return build_op(it->second, {convert(*e.args[0])}, 0, 0, e.loc);
    }
    if (auto it = binary.find(e.prim); it != binary.end()) {
      args_exactly(2, 0);
      return build_op(it->second, {convert(*e.args[0]), convert(*e.args[1])}, 0,
                      0, e.loc);
    }
    if (e.prim == "mux") {
      args_exactly(3, 0);
      return build_op(Op::Mux,
                      {convert(*e.args[0]), convert(*e.args[1]), convert(*e.args[2])},
                      0, 0, e.loc);
    }
    if (e.prim == "bits") {
      args_exactly(1, 2);
      return build_op(Op::Bits, {convert(*e.args[0])}, (uint32_t)e.int_args[0],
                      (uint32_t)e.int_args[1], e.loc);
    }
    if (e.prim == "pad" || e.prim == "shl" || e.prim == "shr") {
      args_exactly(1, 1);
      Op op = e.prim == "pad" ? Op::Pad : (e.prim == "shl" ? Op::Shl : Op::Shr);
      return build_op(op, {convert(*e.args[0])}, (uint32_t)e.int_args[0], 0, e.loc);
    }
    if (e.prim == "tail") {
      args_exactly(1, 1);
      ExprRef a = convert(*e.args[0]);
      uint32_t n = (uint32_t)e.int_args[0];
      if (n >= a->width) diags_.error(e.loc, "tail amount >= operand width");
      return build_op(Op::Bits, {a}, a->width - n - 1, 0, e.loc);
    }
    if (e.prim == "head") {
      args_exactly(1, 1);
      ExprRef a = convert(*e.args[0]);
      uint32_t n = (uint32_t)e.int_args[0];
      if (n == 0 || n > a->width)
        diags_.error(e.loc, "head amount out of range");
      return build_op(Op::Bits, {a}, a->width - 1, a->width - n, e.loc);
    }
    diags_.error(e.loc, "unsupported construct: primitive op '" + e.prim + "'");
  }

  // Pads `e` to the target, diagnosing sign or width mismatches.
  ExprRef fit_connect(ExprRef e, uint32_t width, bool sign, SourceLoc loc,
                      const std::string& target) {
    if (e->sign != sign)
      diags_.error(loc, "signedness mismatch connecting '" + target +
                            "' (use asUInt/asSInt)");
    if (e->width > width)
      diags_.error(loc, "connect source is wider than '" + target +
                            "' (" + std::to_string(e->width) + " > " +
                            std::to_string(width) + "); use bits or tail");
    if (e->width < width) e = mk_pad(std::move(e), width);
    return e;
  }

  void resolve_connects() {
    for (const auto& s : mod_.body) {
      if (s.kind != AstStmt::Kind::Connect) continue;
      const std::string& lhs = s.name;
      size_t dot = lhs.find('.');
      std::string head = dot == std::string::npos ? lhs : lhs.substr(0, dot);
      auto it = symbols_.find(head);
      if (it == symbols_.end())
        diags_.error(s.loc, "undeclared identifier '" + head + "'");
      Entry& ent = it->second;

      if (ent.sym == Sym::ClockSig) {
        // Clock distribution is symbolic; validate the source is a clock.
        if (s.expr->kind != AstExpr::Kind::Ref ||
            !is_clock_name(s.expr->name))
          diags_.error(s.loc, "clock wire must be driven by a clock signal");
        continue;
      }
      if (ent.sym == Sym::Mem) {
        resolve_mem_field(s, lhs);
        continue;
      }
      if (dot != std::string::npos)
        diags_.error(s.loc, "'" + head + "' has no members");
      if (ent.sym == Sym::Input)
        diags_.error(s.loc, "connect drives input port '" + head + "'");

      ExprRef rhs = convert(*s.expr);
      if (ent.sym == Sym::Wire) {
        RtlNode& n = g_.node(ent.node);
        if (n.expr) diags_.error(s.loc, "'" + head + "' already bound");
        n.expr = fit_connect(std::move(rhs), n.width, n.sign, s.loc, head);
      } else if (ent.sym == Sym::Output) {
        RtlNode& n = g_.node(ent.node);
        n.expr = fit_connect(std::move(rhs), n.width, n.sign, s.loc, head);
      } else if (ent.sym == Sym::Reg) {
        RtlNode& w = g_.node(ent.write);
        w.expr = fit_connect(std::move(rhs), w.width, w.sign, s.loc, head);
      }
    }
    attach_resets();
  }

  bool is_clock_name(const std::string& name) {
    auto it = symbols_.find(name);
    return it != symbols_.end() && it->second.sym == Sym::ClockSig;
  }

  void resolve_mem_field(const AstStmt& s, const std::string& lhs) {
    size_t last = lhs.rfind('.');
    std::string field = lhs.substr(last + 1);
    std::string port = lhs.substr(0, last);
    auto pit = mem_ports_.find(port);
    if (pit == mem_ports_.end())
      diags_.error(s.loc, "unknown memory port '" + port + "'");
    if (field == "clk") return;  // single global clock
    auto node_it = port_node_.find(port);
    const RtlNode& pn = g_.node(node_it->second);
    const MemDesc& mem = g_.mems[pn.mem];
    MemPortConn& conn = pit->second;
    ExprRef rhs = convert(*s.expr);
    if (field == "addr") {
      conn.addr = fit_connect(std::move(rhs), mem.addr_width, false, s.loc, lhs);
    } else if (field == "en") {
      conn.en = fit_connect(std::move(rhs), 1, false, s.loc, lhs);
    } else if (field == "data") {
      if (pn.kind != NodeKind::MemWrite)
        diags_.error(s.loc, "connect drives read-port data");
      conn.data = fit_connect(std::move(rhs), mem.data_width, mem.sign, s.loc, lhs);
    } else if (field == "mask") {
      if (pn.kind != NodeKind::MemWrite)
        diags_.error(s.loc, "mask on a read port");
      conn.mask = fit_connect(std::move(rhs), 1, false, s.loc, lhs);
    } else {
      diags_.error(s.loc, "unknown memory port field '" + field + "'");
    }
  }

  void attach_resets() {
    for (const AstStmt* s : reg_decls_) {
      Entry& ent = symbols_[s->name];
      RtlNode& wr = g_.node(ent.write);
      if (!wr.expr) {
        // Normalization always binds registers (self-hold by default).
        diags_.error(s->loc, "register '" + s->name + "' has no next value");
      }
      if (!is_clock_reachable(s->clock))
        diags_.error(s->loc, "register clock '" + s->clock +
                                 "' does not resolve to a Clock input");
      if (!s->reset_signal) continue;
      auto rit = symbols_.find(*s->reset_signal);
      if (rit == symbols_.end())
        diags_.error(s->loc, "undeclared reset signal '" + *s->reset_signal + "'");
      const Entry& rent = rit->second;
      if (rent.sym != Sym::Input && rent.sym != Sym::Wire)
        diags_.error(s->loc, "reset must be an input or wire signal");
      const RtlNode& rnode = g_.node(rent.node);
      if (rnode.width != 1 || rnode.sign)
        diags_.error(s->loc, "reset signal must be UInt<1>");
      ExprRef init = convert(*s->reset_init);
      bool has_ref = false;
      for_each_ref(*init, [&](const Expr&) { has_ref = true; });
      if (has_ref || contains_mem_load(*init))
        diags_.error(s->loc, "register init must be a constant expression");
      WideValue folded = eval_const_expr(*init);
      if (init->width > wr.width)
        diags_.error(s->loc, "register init wider than the register");
      ExprRef cinit = mk_const(folded.extended(wr.width, init->sign), wr.sign);
      ExprRef rref = mk_ref(rnode.id, 1, false);
      wr.expr = mk_mux(rref, cinit, wr.expr);
      wr.reset = ResetInfo{rnode.id, cinit};
    }
  }

  bool is_clock_reachable(const std::string& name) { return is_clock_name(name); }

  void finalize_mems() {
    for (auto& [port, conn] : mem_ports_) {
      uint32_t id = port_node_[port];
      RtlNode& n = g_.node(id);
      const MemDesc& mem = g_.mems[n.mem];
      if (!conn.addr)
        diags_.error(conn.loc, "memory port '" + port + "' has no addr connect");
      if (!conn.en)
        diags_.error(conn.loc, "memory port '" + port + "' has no en connect");
      if (n.kind == NodeKind::MemRead) {
        ExprRef zero = mk_const(WideValue(mem.data_width), mem.sign);
        ExprRef load = mk_mem_load(n.mem, conn.addr, mem.data_width, mem.sign);
        n.expr = mk_mux(conn.en, load, zero);
      } else {
        if (!conn.data)
          diags_.error(conn.loc, "memory port '" + port + "' has no data connect");
        ExprRef we = conn.mask ? mk_op(Op::And, {conn.en, conn.mask}) : conn.en;
        n.expr = mk_cat(conn.addr, mk_cat(we, conn.data));
      }
    }
  }

  void check_connected() {
    for (const auto& n : g_.nodes) {
      if (n.kind == NodeKind::Wire || n.kind == NodeKind::Output) {
        if (!n.expr)
          diags_.error(symbols_.count(n.name) ? symbols_[n.name].loc
                                              : SourceLoc{0, 0},
                       "unconnected signal '" + n.name + "'");
      }
    }
  }

  void check_loops() {
    try {
      g_.topo_order();
    } catch (const CycleError& c) {
      std::string msg = "combinational loop:";
      for (const auto& n : c.cycle) msg += " " + n;
      diags_.error(mod_.loc, msg);
    }
  }

  const ModuleDecl& mod_;
  DiagEngine& diags_;
  LowerOptions opts_;
  RtlGraph g_;
  std::map<std::string, Entry> symbols_;
  std::map<std::string, MemPortConn> mem_ports_;  // "m.r" -> connects
  std::map<std::string, uint32_t> port_node_;
  std::vector<const AstStmt*> node_decls_;
  std::vector<const AstStmt*> reg_decls_;
};

}  // namespace

RtlGraph lower(const FirrtlAst& ast, DiagEngine& diags, const LowerOptions& opts) {
  if (ast.modules.size() != 1)
    diags.error({1, 1}, "lowering expects a flattened single-module circuit");
  LowerCtx ctx(ast.modules[0], diags, opts);
  return ctx.run();
}

}  // namespace actsim
