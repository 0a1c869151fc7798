#include <algorithm>
#include <map>
#include <set>

#include "actsim/firrtl_ast.hpp"
#include "lexer.hpp"

namespace actsim {

AstExprRef ast_lit(SourceLoc loc, AstType t, WideValue v) {
  auto e = std::make_shared<AstExpr>();
  e->kind = AstExpr::Kind::Lit;
  e->loc = loc;
  e->type = t;
  e->value = std::move(v);
  return e;
}

AstExprRef ast_ref(SourceLoc loc, std::string name) {
  auto e = std::make_shared<AstExpr>();
  e->kind = AstExpr::Kind::Ref;
  e->loc = loc;
  e->name = std::move(name);
  return e;
}

AstExprRef ast_prim(SourceLoc loc, std::string op, std::vector<AstExprRef> args,
                    std::vector<uint64_t> int_args) {
  auto e = std::make_shared<AstExpr>();
  e->kind = AstExpr::Kind::Prim;
  e->loc = loc;
  e->prim = std::move(op);
  e->args = std::move(args);
  e->int_args = std::move(int_args);
  return e;
}

AstExprRef ast_mux(SourceLoc loc, AstExprRef c, AstExprRef a, AstExprRef b) {
  auto e = std::make_shared<AstExpr>();
  e->kind = AstExpr::Kind::Mux;
  e->loc = loc;
  e->args = {std::move(c), std::move(a), std::move(b)};
  return e;
}

AstExprRef ast_hole(SourceLoc loc, std::string target) {
  auto e = std::make_shared<AstExpr>();
  e->kind = AstExpr::Kind::Hole;
  e->loc = loc;
  e->name = std::move(target);
  return e;
}

bool ast_expr_equal(const AstExpr& a, const AstExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case AstExpr::Kind::Lit:
      return a.type == b.type && a.value == b.value;
    case AstExpr::Kind::Ref:
    case AstExpr::Kind::Hole:
      return a.name == b.name;
    case AstExpr::Kind::Prim:
    case AstExpr::Kind::Mux:
      break;
  }
  if (a.prim != b.prim || a.int_args != b.int_args) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); i++)
    if (!ast_expr_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

bool ast_contains_hole(const AstExpr& e) {
  if (e.kind == AstExpr::Kind::Hole) return true;
  for (const auto& a : e.args)
    if (ast_contains_hole(*a)) return true;
  return false;
}

namespace {

// Statement list as parsed, `when` blocks still structured.
struct RawStmt {
  AstStmt base;
  bool is_when = false;
  AstExprRef cond;
  std::vector<RawStmt> then_body;
  std::vector<RawStmt> else_body;
};

const std::set<std::string>& known_prims() {
  static const std::set<std::string> s = {
      "add",  "sub",  "mul",  "div",  "rem",  "lt",   "leq",  "gt",
      "geq",  "eq",   "neq",  "and",  "or",   "xor",  "not",  "andr",
      "orr",  "xorr", "shl",  "shr",  "dshl", "dshr", "cat",  "bits",
      "pad",  "mux",  "cvt",  "asUInt", "asSInt", "tail", "head"};
  return s;
}

bool radix_digits_to_value(uint32_t width, uint32_t radix_bits,
                           const std::string& digits, WideValue& out) {
  out.reset(width);
  for (char c : digits) {
    uint32_t d;
    if (c >= '0' && c <= '9')
      d = uint32_t(c - '0');
    else if (c >= 'a' && c <= 'f')
      d = uint32_t(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      d = uint32_t(c - 'A' + 10);
    else
      return false;
    if (d >= (1u << radix_bits)) return false;
    // out = (out << radix_bits) | d, detecting overflow past width
    for (uint32_t i = out.num_words(); i-- > 0;) {
      uint64_t hi = i + 1 < out.num_words() ? out.data()[i + 1] : 0;
      uint64_t v = out.data()[i];
      uint64_t shifted = (v << radix_bits);
      if (i + 1 < out.num_words())
        out.data()[i + 1] = hi | (radix_bits ? v >> (64 - radix_bits) : 0);
      else if (radix_bits && (v >> (64 - radix_bits)) != 0)
        return false;
      out.data()[i] = shifted;
    }
    out.data()[0] |= d;
    WideValue canon = out;
    canon.mask_top();
    if (canon != out) return false;
  }
  return true;
}

class Parser {
public:
  Parser(std::vector<Token> toks, DiagEngine& diags)
      : toks_(std::move(toks)), diags_(diags) {}

  FirrtlAst parse() {
    FirrtlAst ast;
    expect_keyword("circuit");
    ast.circuit_name = expect_id("circuit name");
    expect(Tok::Colon);
    expect(Tok::Newline);
    expect(Tok::Indent);
    while (!at(Tok::Dedent) && !at(Tok::Eof)) ast.modules.push_back(parse_module());
    return ast;
  }

private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t k = 1) const {
    size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_keyword(const std::string& kw) const {
    return cur().kind == Tok::Id && cur().text == kw;
  }
  void advance() {
    if (pos_ + 1 < toks_.size()) pos_++;
  }
  void expect(Tok k) {
    if (!at(k)) diags_.error(cur().loc, "unexpected token");
    advance();
  }
  void expect_keyword(const std::string& kw) {
    if (!at_keyword(kw)) diags_.error(cur().loc, "expected '" + kw + "'");
    advance();
  }
  std::string expect_id(const std::string& what) {
    if (!at(Tok::Id)) diags_.error(cur().loc, "expected " + what);
    std::string s = cur().text;
    advance();
    return s;
  }
  uint64_t expect_int(const std::string& what) {
    if (!at(Tok::Int)) diags_.error(cur().loc, "expected " + what);
    uint64_t v = cur().ival;
    advance();
    return v;
  }
  void expect_newline() {
    if (!at(Tok::Newline)) diags_.error(cur().loc, "expected end of line");
    advance();
  }

  ModuleDecl parse_module() {
    ModuleDecl m;
    if (at_keyword("extmodule"))
      diags_.error(cur().loc, "unsupported construct: extmodule");
    expect_keyword("module");
    m.loc = cur().loc;
    m.name = expect_id("module name");
    expect(Tok::Colon);
    expect(Tok::Newline);
    if (!at(Tok::Indent)) return m;  // empty module
    advance();
    bool seen_stmt = false;
    std::vector<RawStmt> raw;
    while (!at(Tok::Dedent) && !at(Tok::Eof)) {
      if (at_keyword("input") || at_keyword("output")) {
        if (seen_stmt)
          diags_.error(cur().loc, "port declared after statements");
        m.ports.push_back(parse_port());
      } else {
        seen_stmt = true;
        parse_stmt_into(raw);
      }
    }
    expect(Tok::Dedent);
    normalize_module(m, raw);
    return m;
  }

  PortDecl parse_port() {
    PortDecl p;
    p.loc = cur().loc;
    p.is_input = cur().text == "input";
    advance();
    p.name = expect_id("port name");
    expect(Tok::Colon);
    p.type = parse_type();
    expect_newline();
    return p;
  }

  AstType parse_type() {
    SourceLoc loc = cur().loc;
    std::string name = expect_id("type");
    AstType t;
    if (name == "Clock") {
      t.kind = GroundType::Clock;
      t.width = 1;
      return t;
    }
    if (name == "Reset") {
      t.kind = GroundType::UInt;
      t.width = 1;
      return t;
    }
    if (name == "AsyncReset")
      diags_.error(loc, "unsupported construct: AsyncReset (synchronous reset only)");
    if (name != "UInt" && name != "SInt")
      diags_.error(loc, "unsupported construct: type '" + name +
                            "' (ground UInt/SInt only)");
    t.kind = name == "UInt" ? GroundType::UInt : GroundType::SInt;
    if (!at(Tok::Less))
      diags_.error(loc, "explicit width required (no width inference)");
    advance();
    uint64_t w = expect_int("width");
    if (w == 0) diags_.error(loc, "zero-width signals unsupported");
    expect(Tok::Greater);
    t.width = (uint32_t)w;
    return t;
  }

  void parse_stmt_into(std::vector<RawStmt>& out) {
    SourceLoc loc = cur().loc;
    if (at_keyword("wire")) {
      advance();
      RawStmt s;
      s.base.kind = AstStmt::Kind::Wire;
      s.base.loc = loc;
      s.base.name = expect_id("wire name");
      expect(Tok::Colon);
      s.base.type = parse_type();
      expect_newline();
      out.push_back(std::move(s));
      return;
    }
    if (at_keyword("reg")) {
      out.push_back(parse_reg(loc));
      return;
    }
    if (at_keyword("node")) {
      advance();
      RawStmt s;
      s.base.kind = AstStmt::Kind::Node;
      s.base.loc = loc;
      s.base.name = expect_id("node name");
      expect(Tok::Equal);
      s.base.expr = parse_expr();
      expect_newline();
      out.push_back(std::move(s));
      return;
    }
    if (at_keyword("mem")) {
      out.push_back(parse_mem(loc));
      return;
    }
    if (at_keyword("inst")) {
      advance();
      RawStmt s;
      s.base.kind = AstStmt::Kind::Inst;
      s.base.loc = loc;
      s.base.name = expect_id("instance name");
      expect_keyword("of");
      s.base.module = expect_id("module name");
      expect_newline();
      out.push_back(std::move(s));
      return;
    }
    if (at_keyword("when")) {
      out.push_back(parse_when(loc));
      return;
    }
    if (at_keyword("skip")) {
      advance();
      expect_newline();
      return;
    }
    if (at_keyword("stop") || at_keyword("printf") || at_keyword("assert") ||
        at_keyword("assume") || at_keyword("cover")) {
      diags_.warn(loc, "ignoring verification statement '" + cur().text + "'");
      while (!at(Tok::Newline) && !at(Tok::Eof)) advance();
      expect_newline();
      return;
    }
    if (at(Tok::Id)) {
      // Connect or `is invalid`.
      std::string lhs = parse_dotted_name();
      if (at_keyword("is")) {
        diags_.error(loc, "unsupported construct: 'is invalid' (no implicit invalidation)");
      }
      if (!at(Tok::Connect))
        diags_.error(cur().loc, "expected '<=' in connect statement");
      advance();
      RawStmt s;
      s.base.kind = AstStmt::Kind::Connect;
      s.base.loc = loc;
      s.base.name = std::move(lhs);
      s.base.expr = parse_expr();
      expect_newline();
      out.push_back(std::move(s));
      return;
    }
    diags_.error(loc, "unexpected statement");
  }

  RawStmt parse_reg(SourceLoc loc) {
    advance();
    RawStmt s;
    s.base.kind = AstStmt::Kind::Reg;
    s.base.loc = loc;
    s.base.name = expect_id("register name");
    expect(Tok::Colon);
    s.base.type = parse_type();
    if (s.base.type.kind == GroundType::Clock)
      diags_.error(loc, "register of Clock type");
    expect(Tok::Comma);
    s.base.clock = parse_dotted_name();
    if (at_keyword("with")) {
      advance();
      expect(Tok::Colon);
      bool indented = false;
      if (at(Tok::Newline)) {
        advance();
        expect(Tok::Indent);
        indented = true;
      }
      expect(Tok::LParen);
      expect_keyword("reset");
      expect(Tok::FatArrow);
      expect(Tok::LParen);
      s.base.reset_signal = parse_dotted_name();
      expect(Tok::Comma);
      s.base.reset_init = parse_expr();
      expect(Tok::RParen);
      expect(Tok::RParen);
      expect_newline();
      if (indented) expect(Tok::Dedent);
    } else {
      expect_newline();
    }
    return s;
  }

  RawStmt parse_mem(SourceLoc loc) {
    advance();
    RawStmt s;
    s.base.kind = AstStmt::Kind::Mem;
    s.base.loc = loc;
    s.base.name = expect_id("memory name");
    expect(Tok::Colon);
    expect(Tok::Newline);
    expect(Tok::Indent);
    bool have_data = false, have_depth = false;
    while (!at(Tok::Dedent) && !at(Tok::Eof)) {
      SourceLoc floc = cur().loc;
      std::string field = expect_id("memory field");
      expect(Tok::FatArrow);
      if (field == "data-type" || field == "data" || field == "dataType") {
        s.base.mem.data_type = parse_type();
        have_data = true;
      } else if (field == "depth") {
        s.base.mem.depth = (uint32_t)expect_int("depth");
        have_depth = true;
      } else if (field == "read-latency") {
        uint64_t v = expect_int("read latency");
        if (v != 0)
          diags_.error(floc, "unsupported construct: read-latency != 0");
      } else if (field == "write-latency") {
        uint64_t v = expect_int("write latency");
        if (v != 1)
          diags_.error(floc, "unsupported construct: write-latency != 1");
      } else if (field == "reader") {
        s.base.mem.readers.push_back(expect_id("reader port name"));
      } else if (field == "writer") {
        s.base.mem.writers.push_back(expect_id("writer port name"));
      } else if (field == "readwriter") {
        diags_.error(floc, "unsupported construct: readwriter port");
      } else if (field == "read-under-write") {
        std::string v = expect_id("read-under-write mode");
        if (v == "new")
          diags_.error(floc, "unsupported construct: read-under-write => new");
      } else {
        diags_.error(floc, "unknown memory field '" + field + "'");
      }
      expect_newline();
    }
    expect(Tok::Dedent);
    if (!have_data || !have_depth)
      diags_.error(loc, "memory requires data-type and depth");
    if (s.base.mem.depth == 0) diags_.error(loc, "memory depth must be positive");
    return s;
  }

  // `when c :` with an indented block or a single inline statement;
  // `else` takes a block, an inline statement, or a chained `when`.
  RawStmt parse_when(SourceLoc loc) {
    advance();
    RawStmt s;
    s.is_when = true;
    s.base.loc = loc;
    s.cond = parse_expr();
    expect(Tok::Colon);
    if (at(Tok::Newline)) {
      advance();
      expect(Tok::Indent);
      while (!at(Tok::Dedent) && !at(Tok::Eof)) parse_stmt_into(s.then_body);
      expect(Tok::Dedent);
    } else {
      parse_inline_stmt_into(s.then_body);
      if (at(Tok::Newline)) advance();
    }
    if (at_keyword("else")) {
      advance();
      if (at_keyword("when")) {
        s.else_body.push_back(parse_when(cur().loc));
      } else {
        expect(Tok::Colon);
        if (at(Tok::Newline)) {
          advance();
          expect(Tok::Indent);
          while (!at(Tok::Dedent) && !at(Tok::Eof)) parse_stmt_into(s.else_body);
          expect(Tok::Dedent);
        } else {
          parse_inline_stmt_into(s.else_body);
          if (at(Tok::Newline)) advance();
        }
      }
    }
    return s;
  }

  // Single statement on the same line as `when c :`; connects only.
  void parse_inline_stmt_into(std::vector<RawStmt>& out) {
    SourceLoc loc = cur().loc;
    if (at_keyword("skip")) {
      advance();
      return;
    }
    if (!at(Tok::Id)) diags_.error(loc, "expected inline statement");
    std::string lhs = parse_dotted_name();
    if (!at(Tok::Connect))
      diags_.error(cur().loc, "expected '<=' in inline connect");
    advance();
    RawStmt s;
    s.base.kind = AstStmt::Kind::Connect;
    s.base.loc = loc;
    s.base.name = std::move(lhs);
    s.base.expr = parse_expr();
    out.push_back(std::move(s));
  }

  std::string parse_dotted_name() {
    std::string name = expect_id("identifier");
    while (at(Tok::Dot)) {
      advance();
      name += ".";
      name += expect_id("identifier after '.'");
    }
    return name;
  }

  AstExprRef parse_expr() {
    SourceLoc loc = cur().loc;
    if (at(Tok::Id) && (cur().text == "UInt" || cur().text == "SInt"))
      return parse_literal();
    if (at_keyword("mux")) {
      advance();
      expect(Tok::LParen);
      AstExprRef c = parse_expr();
      expect(Tok::Comma);
      AstExprRef a = parse_expr();
      expect(Tok::Comma);
      AstExprRef b = parse_expr();
      expect(Tok::RParen);
      return ast_mux(loc, std::move(c), std::move(a), std::move(b));
    }
    if (at_keyword("validif"))
      diags_.error(loc, "unsupported construct: validif");
    if (at(Tok::Id) && peek().kind == Tok::LParen) {
      std::string op = cur().text;
      if (!known_prims().count(op))
        diags_.error(loc, "unsupported construct: primitive op '" + op + "'");
      advance();
      advance();  // (
      std::vector<AstExprRef> args;
      std::vector<uint64_t> int_args;
      bool first = true;
      while (!at(Tok::RParen)) {
        if (!first) expect(Tok::Comma);
        first = false;
        if (at(Tok::Int)) {
          int_args.push_back(cur().ival);
          advance();
        } else {
          if (!int_args.empty())
            diags_.error(cur().loc, "expression argument after integer argument");
          args.push_back(parse_expr());
        }
      }
      advance();  // )
      return ast_prim(loc, std::move(op), std::move(args), std::move(int_args));
    }
    if (at(Tok::Id)) return ast_ref(loc, parse_dotted_name());
    diags_.error(loc, "expected expression");
  }

  AstExprRef parse_literal() {
    SourceLoc loc = cur().loc;
    bool sign = cur().text == "SInt";
    advance();
    AstType t;
    t.kind = sign ? GroundType::SInt : GroundType::UInt;
    if (!at(Tok::Less))
      diags_.error(loc, "literal requires explicit width");
    advance();
    uint64_t w = expect_int("width");
    if (w == 0) diags_.error(loc, "zero-width literal");
    expect(Tok::Greater);
    t.width = (uint32_t)w;
    expect(Tok::LParen);
    WideValue v;
    if (at(Tok::String)) {
      const std::string& s = cur().text;
      if (s.empty()) diags_.error(loc, "empty literal string");
      uint32_t radix_bits;
      switch (s[0]) {
        case 'h': radix_bits = 4; break;
        case 'o': radix_bits = 3; break;
        case 'b': radix_bits = 1; break;
        default: diags_.error(loc, "literal string must start with h, o, or b");
      }
      if (!radix_digits_to_value(t.width, radix_bits, s.substr(1), v))
        diags_.error(loc, "literal does not fit in declared width");
      advance();
    } else {
      bool neg = false;
      if (at(Tok::Minus)) {
        if (!sign) diags_.error(loc, "negative UInt literal");
        neg = true;
        advance();
      }
      uint64_t mag = expect_int("literal value");
      uint64_t limit;
      if (sign)
        limit = t.width >= 65 ? ~uint64_t{0}
                              : (neg ? (uint64_t{1} << (t.width - 1))
                                     : (uint64_t{1} << (t.width - 1)) - 1);
      else
        limit = t.width >= 64 ? ~uint64_t{0} : (uint64_t{1} << t.width) - 1;
      if (mag > limit) diags_.error(loc, "literal does not fit in declared width");
      v = WideValue::from_u64(t.width, mag);
      if (neg) v = v.negated();
    }
    expect(Tok::RParen);
    return ast_lit(loc, t, std::move(v));
  }

  // --- `when` normalization -------------------------------------------------

  struct Binding {
    AstExprRef expr;
    SourceLoc loc;
  };
  using Env = std::map<std::string, Binding>;

  void normalize_module(ModuleDecl& m, const std::vector<RawStmt>& raw) {
    std::vector<AstStmt> decls;
    std::vector<std::string> order;
    Env env;
    std::set<std::string> regs;
    run_block(raw, decls, order, env, regs, /*in_when=*/false);
    m.body = std::move(decls);
    for (const auto& name : order) {
      AstStmt c;
      c.kind = AstStmt::Kind::Connect;
      c.loc = env[name].loc;
      c.name = name;
      c.expr = env[name].expr;
      m.body.push_back(std::move(c));
    }
  }

  // Processes statements, updating env. Returns the names bound (in first-bind
  // order) so `when` merging visits targets deterministically.
  std::vector<std::string> run_block(const std::vector<RawStmt>& stmts,
                                     std::vector<AstStmt>& decls,
                                     std::vector<std::string>& order, Env& env,
                                     std::set<std::string>& regs, bool in_when) {
    std::vector<std::string> touched;
    auto bind = [&](const std::string& name, AstExprRef e, SourceLoc loc) {
      if (!env.count(name)) {
        order.push_back(name);
        touched.push_back(name);
      } else if (std::find(touched.begin(), touched.end(), name) == touched.end()) {
        touched.push_back(name);
      }
      env[name] = {std::move(e), loc};
    };
    for (const auto& s : stmts) {
      if (s.is_when) {
        Env saved = env;
        std::vector<std::string> then_touched =
            run_block(s.then_body, decls, order, env, regs, true);
        Env then_env = std::move(env);
        env = saved;
        std::vector<std::string> else_touched =
            run_block(s.else_body, decls, order, env, regs, true);
        Env else_env = std::move(env);
        env = std::move(saved);

        std::vector<std::string> merge = then_touched;
        for (const auto& n : else_touched)
          if (std::find(merge.begin(), merge.end(), n) == merge.end())
            merge.push_back(n);
        for (const auto& n : merge) {
          auto fallback = [&](const std::string& name) -> AstExprRef {
            auto it = env.find(name);
            if (it != env.end()) return it->second.expr;
            if (regs.count(name)) return ast_ref(s.base.loc, name);
            return ast_hole(s.base.loc, name);
          };
          AstExprRef tv = then_env.count(n) ? then_env[n].expr : fallback(n);
          AstExprRef ev = else_env.count(n) ? else_env[n].expr : fallback(n);
          bind(n, ast_mux(s.base.loc, s.cond, tv, ev), s.base.loc);
        }
        continue;
      }
      switch (s.base.kind) {
        case AstStmt::Kind::Connect:
          bind(s.base.name, s.base.expr, s.base.loc);
          break;
        case AstStmt::Kind::Node:
          // Node decls are pure; hoisting out of `when` preserves their value.
          decls.push_back(s.base);
          break;
        case AstStmt::Kind::Reg:
          if (in_when)
            diags_.error(s.base.loc, "unsupported construct: reg declared inside when");
          decls.push_back(s.base);
          regs.insert(s.base.name);
          bind(s.base.name, ast_ref(s.base.loc, s.base.name), s.base.loc);
          break;
        case AstStmt::Kind::Wire:
        case AstStmt::Kind::Mem:
        case AstStmt::Kind::Inst:
          if (in_when)
            diags_.error(s.base.loc,
                         "unsupported construct: declaration inside when");
          decls.push_back(s.base);
          break;
      }
    }
    return touched;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  DiagEngine& diags_;
};

}  // namespace

FirrtlAst parse_firrtl(const std::string& text, DiagEngine& diags) {
  Parser p(lex_firrtl(text, diags), diags);
  return p.parse();
}

}  // namespace actsim
