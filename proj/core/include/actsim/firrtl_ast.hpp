#pragma once
// AST for the supported FIRRTL subset: ground types only, scalar signals,
// `when` blocks normalized away by the parser.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "actsim/diagnostics.hpp"
#include "actsim/wide_value.hpp"

namespace actsim {

enum class GroundType : uint8_t { UInt, SInt, Clock };

struct AstType {
  GroundType kind = GroundType::UInt;
  uint32_t width = 1;  // Clock is carried as width 1

  bool operator==(const AstType&) const = default;
};

struct AstExpr;
using AstExprRef = std::shared_ptr<const AstExpr>;

struct AstExpr {
  enum class Kind : uint8_t { Lit, Ref, Prim, Mux, Hole };
  Kind kind = Kind::Ref;
  SourceLoc loc;

  AstType type;     // Lit
  WideValue value;  // Lit (two's complement pattern for SInt)

  std::string name;  // Ref: dotted path; Hole: the unconnected target

  std::string prim;  // Prim: textual op name (includes tail/head sugar)
  std::vector<AstExprRef> args;
  std::vector<uint64_t> int_args;
};

AstExprRef ast_lit(SourceLoc loc, AstType t, WideValue v);
AstExprRef ast_ref(SourceLoc loc, std::string name);
AstExprRef ast_prim(SourceLoc loc, std::string op, std::vector<AstExprRef> args,
                    std::vector<uint64_t> int_args = {});
AstExprRef ast_mux(SourceLoc loc, AstExprRef c, AstExprRef a, AstExprRef b);
AstExprRef ast_hole(SourceLoc loc, std::string target);

bool ast_expr_equal(const AstExpr& a, const AstExpr& b);
bool ast_contains_hole(const AstExpr& e);

struct MemFields {
  AstType data_type;
  uint32_t depth = 0;
  uint32_t read_latency = 0;
  uint32_t write_latency = 1;
  std::vector<std::string> readers;
  std::vector<std::string> writers;
};

struct AstStmt {
  enum class Kind : uint8_t { Wire, Reg, Node, Mem, Inst, Connect };
  Kind kind = Kind::Wire;
  SourceLoc loc;

  std::string name;  // decl name; Connect: lhs dotted path
  AstType type;      // Wire/Reg decls

  // Reg
  std::string clock;               // referenced clock signal
  std::optional<std::string> reset_signal;
  AstExprRef reset_init;

  AstExprRef expr;  // Node: bound expr; Connect: rhs

  MemFields mem;  // Mem

  std::string module;  // Inst: instantiated module name
};

struct PortDecl {
  SourceLoc loc;
  std::string name;
  bool is_input = true;
  AstType type;
};

struct ModuleDecl {
  SourceLoc loc;
  std::string name;
  std::vector<PortDecl> ports;
  std::vector<AstStmt> body;  // normalized: no When statements
};

struct FirrtlAst {
  std::string circuit_name;
  std::vector<ModuleDecl> modules;

  const ModuleDecl* find_module(const std::string& name) const {
    for (const auto& m : modules)
      if (m.name == name) return &m;
    return nullptr;
  }
};

// Parses FIRRTL text. `when` blocks come out as mux chains on connects
// (statement order, last connect wins; registers hold when unconnected).
FirrtlAst parse_firrtl(const std::string& text, DiagEngine& diags);

// Prints an AST in parseable form; parse(print(ast)) is isomorphic to ast.
std::string print_firrtl(const FirrtlAst& ast);

// Expands the instance hierarchy under the top module (circuit name) into a
// single module; instance-scoped names are joined with '$'.
FirrtlAst flatten(const FirrtlAst& ast, DiagEngine& diags);

}  // namespace actsim
