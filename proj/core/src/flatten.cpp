#include <map>
#include <set>

#include "actsim/firrtl_ast.hpp"

namespace actsim {

namespace {

enum class SymKind { Port, Wire, Reg, Node, Mem, Inst };

using SymTable = std::map<std::string, SymKind>;

SymTable build_symbols(const ModuleDecl& m) {
  SymTable t;
  for (const auto& p : m.ports) t[p.name] = SymKind::Port;
  for (const auto& s : m.body) {
    switch (s.kind) {
      case AstStmt::Kind::Wire: t[s.name] = SymKind::Wire; break;
      case AstStmt::Kind::Reg: t[s.name] = SymKind::Reg; break;
      case AstStmt::Kind::Node: t[s.name] = SymKind::Node; break;
      case AstStmt::Kind::Mem: t[s.name] = SymKind::Mem; break;
      case AstStmt::Kind::Inst: t[s.name] = SymKind::Inst; break;
      case AstStmt::Kind::Connect: break;
    }
  }
  return t;
}

class Flattener {
public:
  Flattener(const FirrtlAst& ast, DiagEngine& diags) : ast_(ast), diags_(diags) {}

  FirrtlAst run() {
    const ModuleDecl* top = ast_.find_module(ast_.circuit_name);
    if (!top)
      diags_.error({1, 1}, "top module '" + ast_.circuit_name + "' not found");
    check_no_recursion(top->name, {});
    FirrtlAst out;
    out.circuit_name = ast_.circuit_name;
    ModuleDecl flat;
    flat.loc = top->loc;
    flat.name = top->name;
    flat.ports = top->ports;
    expand(*top, "", flat.body);
    out.modules.push_back(std::move(flat));
    return out;
  }

private:
  void check_no_recursion(const std::string& name, std::set<std::string> stack) {
    if (stack.count(name)) {
      const ModuleDecl* m = ast_.find_module(name);
      diags_.error(m ? m->loc : SourceLoc{1, 1},
                   "recursive instantiation of module '" + name + "'");
    }
    stack.insert(name);
    const ModuleDecl* m = ast_.find_module(name);
    if (!m) return;  // reported at expansion
    for (const auto& s : m->body)
      if (s.kind == AstStmt::Kind::Inst) check_no_recursion(s.module, stack);
  }

  // Rewrites a dotted reference from module-local scope to flattened scope.
  std::string map_name(const std::string& dotted, const std::string& prefix,
                       const SymTable& syms, SourceLoc loc) {
    size_t dot = dotted.find('.');
    std::string head = dot == std::string::npos ? dotted : dotted.substr(0, dot);
    auto it = syms.find(head);
    if (it == syms.end())
      diags_.error(loc, "undeclared identifier '" + head + "'");
    if (it->second == SymKind::Inst) {
      if (dot == std::string::npos)
        diags_.error(loc, "instance '" + head + "' used as a value");
      std::string rest = dotted.substr(dot + 1);
      if (rest.find('.') != std::string::npos)
        diags_.error(loc, "nested member access through instance port");
      return prefix + head + "$" + rest;
    }
    if (it->second == SymKind::Mem) return prefix + dotted;  // keep port path
    if (dot != std::string::npos)
      diags_.error(loc, "'" + head + "' has no members");
    return prefix + dotted;
  }

  AstExprRef map_expr(const AstExprRef& e, const std::string& prefix,
                      const SymTable& syms) {
    switch (e->kind) {
      case AstExpr::Kind::Lit:
      case AstExpr::Kind::Hole:
        return e;
      case AstExpr::Kind::Ref:
        return ast_ref(e->loc, map_name(e->name, prefix, syms, e->loc));
      case AstExpr::Kind::Mux:
      case AstExpr::Kind::Prim: {
        auto n = std::make_shared<AstExpr>(*e);
        for (auto& a : n->args) a = map_expr(a, prefix, syms);
        return n;
      }
    }
    return e;
  }

  void expand(const ModuleDecl& m, const std::string& prefix,
              std::vector<AstStmt>& out) {
    SymTable syms = build_symbols(m);
    for (const auto& s : m.body) {
      switch (s.kind) {
        case AstStmt::Kind::Wire: {
          AstStmt c = s;
          c.name = prefix + s.name;
          out.push_back(std::move(c));
          break;
        }
        case AstStmt::Kind::Reg: {
          AstStmt c = s;
          c.name = prefix + s.name;
          c.clock = map_name(s.clock, prefix, syms, s.loc);
          if (s.reset_signal)
            c.reset_signal = map_name(*s.reset_signal, prefix, syms, s.loc);
          if (s.reset_init) c.reset_init = map_expr(s.reset_init, prefix, syms);
          out.push_back(std::move(c));
          break;
        }
        case AstStmt::Kind::Node: {
          AstStmt c = s;
          c.name = prefix + s.name;
          c.expr = map_expr(s.expr, prefix, syms);
          out.push_back(std::move(c));
          break;
        }
        case AstStmt::Kind::Mem: {
          AstStmt c = s;
          c.name = prefix + s.name;
          out.push_back(std::move(c));
          break;
        }
        case AstStmt::Kind::Connect: {
          AstStmt c = s;
          c.name = map_name(s.name, prefix, syms, s.loc);
          c.expr = map_expr(s.expr, prefix, syms);
          out.push_back(std::move(c));
          break;
        }
        case AstStmt::Kind::Inst: {
          const ModuleDecl* child = ast_.find_module(s.module);
          if (!child)
            diags_.error(s.loc, "instance of undeclared module '" + s.module + "'");
          std::string child_prefix = prefix + s.name + "$";
          // Instance ports become wires in the flat module.
          for (const auto& p : child->ports) {
            AstStmt w;
            w.kind = AstStmt::Kind::Wire;
            w.loc = s.loc;
            w.name = child_prefix + p.name;
            w.type = p.type;
            out.push_back(std::move(w));
          }
          expand(*child, child_prefix, out);
          break;
        }
      }
    }
  }

  const FirrtlAst& ast_;
  DiagEngine& diags_;
};

}  // namespace

FirrtlAst flatten(const FirrtlAst& ast, DiagEngine& diags) {
  Flattener f(ast, diags);
  return f.run();
}

}  // namespace actsim
