#include <sstream>

#include "actsim/firrtl_ast.hpp"

namespace actsim {

namespace {

std::string type_str(const AstType& t) {
  if (t.kind == GroundType::Clock) return "Clock";
  std::ostringstream os;
  os << (t.kind == GroundType::UInt ? "UInt" : "SInt") << "<" << t.width << ">";
  return os.str();
}

std::string lit_str(const AstType& t, const WideValue& v) {
  std::ostringstream os;
  os << (t.kind == GroundType::SInt ? "SInt" : "UInt") << "<" << t.width << ">(";
  if (t.kind == GroundType::SInt && v.sign_bit())
    os << "-" << v.negated().to_decimal();
  else
    os << v.to_decimal();
  os << ")";
  return os.str();
}

std::string expr_str(const AstExpr& e) {
  switch (e.kind) {
    case AstExpr::Kind::Lit:
      return lit_str(e.type, e.value);
    case AstExpr::Kind::Ref:
      return e.name;
    case AstExpr::Kind::Hole:
      return "HOLE(" + e.name + ")";
    case AstExpr::Kind::Mux: {
      std::ostringstream os;
      os << "mux(" << expr_str(*e.args[0]) << ", " << expr_str(*e.args[1])
         << ", " << expr_str(*e.args[2]) << ")";
      return os.str();
    }
    case AstExpr::Kind::Prim: {
      std::ostringstream os;
      os << e.prim << "(";
      bool first = true;
      for (const auto& a : e.args) {
        if (!first) os << ", ";
        first = false;
        os << expr_str(*a);
      }
      for (uint64_t v : e.int_args) {
        if (!first) os << ", ";
        first = false;
        os << v;
      }
      os << ")";
      return os.str();
    }
  }
  return "?";
}

}  // namespace

std::string print_firrtl(const FirrtlAst& ast) {
  std::ostringstream os;
  os << "circuit " << ast.circuit_name << " :\n";
  for (const auto& m : ast.modules) {
    os << "  module " << m.name << " :\n";
    for (const auto& p : m.ports)
      os << "    " << (p.is_input ? "input" : "output") << " " << p.name
         << " : " << type_str(p.type) << "\n";
    for (const auto& s : m.body) {
      switch (s.kind) {
        case AstStmt::Kind::Wire:
          os << "    wire " << s.name << " : " << type_str(s.type) << "\n";
          break;
        case AstStmt::Kind::Reg:
          os << "    reg " << s.name << " : " << type_str(s.type) << ", "
             << s.clock;
          if (s.reset_signal)
            os << " with : (reset => (" << *s.reset_signal << ", "
               << expr_str(*s.reset_init) << "))";
          os << "\n";
          break;
        case AstStmt::Kind::Node:
          os << "    node " << s.name << " = " << expr_str(*s.expr) << "\n";
          break;
        case AstStmt::Kind::Mem:
          os << "    mem " << s.name << " :\n";
          os << "      data-type => " << type_str(s.mem.data_type) << "\n";
          os << "      depth => " << s.mem.depth << "\n";
          os << "      read-latency => 0\n";
          os << "      write-latency => 1\n";
          for (const auto& r : s.mem.readers) os << "      reader => " << r << "\n";
          for (const auto& w : s.mem.writers) os << "      writer => " << w << "\n";
          break;
        case AstStmt::Kind::Inst:
          os << "    inst " << s.name << " of " << s.module << "\n";
          break;
        case AstStmt::Kind::Connect:
          os << "    " << s.name << " <= " << expr_str(*s.expr) << "\n";
          break;
      }
    }
  }
  return os.str();
}

}  // namespace actsim
