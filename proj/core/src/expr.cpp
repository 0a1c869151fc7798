#include "actsim/expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace actsim {

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Ref: return "ref";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Rem: return "rem";
    case Op::Lt: return "lt";
    case Op::Leq: return "leq";
    case Op::Gt: return "gt";
    case Op::Geq: return "geq";
    case Op::Eq: return "eq";
    case Op::Neq: return "neq";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Xor: return "xor";
    case Op::Not: return "not";
    case Op::AndR: return "andr";
    case Op::OrR: return "orr";
    case Op::XorR: return "xorr";
    case Op::Shl: return "shl";
    case Op::Shr: return "shr";
    case Op::Dshl: return "dshl";
    case Op::Dshr: return "dshr";
    case Op::Cat: return "cat";
    case Op::Bits: return "bits";
    case Op::Pad: return "pad";
    case Op::Mux: return "mux";
    case Op::Cvt: return "cvt";
    case Op::AsUInt: return "asUInt";
    case Op::AsSInt: return "asSInt";
    case Op::MemLoad: return "memload";
  }
  return "?";
}

std::optional<OpSig> infer_sig(Op op, const std::vector<ExprRef>& c,
                               uint32_t arg0, uint32_t arg1, std::string* err) {
  auto fail = [&](const std::string& m) -> std::optional<OpSig> {
    if (err) *err = m;
    return std::nullopt;
  };
  auto need = [&](size_t n) { return c.size() == n; };
  auto same_sign2 = [&] { return c[0]->sign == c[1]->sign; };

  switch (op) {
    case Op::Const:
    case Op::Ref:
    case Op::MemLoad:
      return fail("infer_sig not applicable to leaf");
    case Op::Add:
    case Op::Sub:
      if (!need(2)) return fail("binary op arity");
      if (!same_sign2()) return fail(std::string(op_name(op)) + " operands must share signedness");
      return OpSig{std::max(c[0]->width, c[1]->width) + 1, c[0]->sign};
    case Op::Mul:
      if (!need(2)) return fail("binary op arity");
      if (!same_sign2()) return fail("mul operands must share signedness");
      return OpSig{c[0]->width + c[1]->width, c[0]->sign};
    case Op::Div:
      if (!need(2)) return fail("binary op arity");
      if (!same_sign2()) return fail("div operands must share signedness");
      return OpSig{c[0]->sign ? c[0]->width + 1 : c[0]->width, c[0]->sign};
    case Op::Rem:
      if (!need(2)) return fail("binary op arity");
      if (!same_sign2()) return fail("rem operands must share signedness");
      return OpSig{std::min(c[0]->width, c[1]->width), c[0]->sign};
    case Op::Lt:
    case Op::Leq:
    case Op::Gt:
    case Op::Geq:
    case Op::Eq:
    case Op::Neq:
      if (!need(2)) return fail("binary op arity");
      if (!same_sign2()) return fail("comparison operands must share signedness");
      return OpSig{1, false};
    case Op::And:
    case Op::Or:
    case Op::Xor:
      if (!need(2)) return fail("binary op arity");
      if (!same_sign2()) return fail("bitwise operands must share signedness");
      return OpSig{std::max(c[0]->width, c[1]->width), false};
    case Op::Not:
      if (!need(1)) return fail("unary op arity");
      return OpSig{c[0]->width, false};
    case Op::AndR:
    case Op::OrR:
    case Op::XorR:
      if (!need(1)) return fail("unary op arity");
      return OpSig{1, false};
    case Op::Shl:
      if (!need(1)) return fail("unary op arity");
      return OpSig{c[0]->width + arg0, c[0]->sign};
    case Op::Shr:
      if (!need(1)) return fail("unary op arity");
      return OpSig{c[0]->width > arg0 ? c[0]->width - arg0 : 1, c[0]->sign};
    case Op::Dshl: {
      if (!need(2)) return fail("binary op arity");
      if (c[1]->sign) return fail("dshl shift amount must be unsigned");
      if (c[1]->width > 20) return fail("dshl shift amount wider than 20 bits");
      uint32_t grow = (uint32_t(1) << c[1]->width) - 1;
      return OpSig{c[0]->width + grow, c[0]->sign};
    }
    case Op::Dshr:
      if (!need(2)) return fail("binary op arity");
      if (c[1]->sign) return fail("dshr shift amount must be unsigned");
      return OpSig{c[0]->width, c[0]->sign};
    case Op::Cat:
      if (!need(2)) return fail("binary op arity");
      return OpSig{c[0]->width + c[1]->width, false};
    case Op::Bits:
      if (!need(1)) return fail("unary op arity");
      if (arg0 < arg1) return fail("bits hi < lo");
      if (arg0 >= c[0]->width) return fail("bits hi out of range");
      return OpSig{arg0 - arg1 + 1, false};
    case Op::Pad:
      if (!need(1)) return fail("unary op arity");
      return OpSig{std::max(c[0]->width, arg0), c[0]->sign};
    case Op::Mux:
      if (!need(3)) return fail("mux arity");
      if (c[0]->width != 1 || c[0]->sign) return fail("mux condition must be UInt<1>");
      if (c[1]->sign != c[2]->sign) return fail("mux arms must share signedness");
      return OpSig{std::max(c[1]->width, c[2]->width), c[1]->sign};
    case Op::Cvt:
      if (!need(1)) return fail("unary op arity");
      return OpSig{c[0]->sign ? c[0]->width : c[0]->width + 1, true};
    case Op::AsUInt:
      if (!need(1)) return fail("unary op arity");
      return OpSig{c[0]->width, false};
    case Op::AsSInt:
      if (!need(1)) return fail("unary op arity");
      return OpSig{c[0]->width, true};
  }
  return fail("unknown op");
}

ExprRef mk_const(WideValue v, bool sign) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Const;
  e->width = v.width();
  e->sign = sign;
  e->cval = std::move(v);
  return e;
}

ExprRef mk_const_u64(uint32_t width, uint64_t v) {
  return mk_const(WideValue::from_u64(width, v), false);
}

ExprRef mk_ref(uint32_t node, uint32_t width, bool sign) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Ref;
  e->node = node;
  e->width = width;
  e->sign = sign;
  return e;
}

ExprRef mk_op(Op op, std::vector<ExprRef> children, uint32_t arg0, uint32_t arg1) {
  std::string err;
  auto sig = infer_sig(op, children, arg0, arg1, &err);
  assert(sig && "mk_op: illegal operand combination");
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->width = sig->width;
  e->sign = sig->sign;
  e->arg0 = arg0;
  e->arg1 = arg1;
  e->children = std::move(children);
  return e;
}

ExprRef mk_bits(ExprRef e, uint32_t hi, uint32_t lo) {
  return mk_op(Op::Bits, {std::move(e)}, hi, lo);
}

ExprRef mk_pad(ExprRef e, uint32_t n) { return mk_op(Op::Pad, {std::move(e)}, n); }

ExprRef mk_mux(ExprRef c, ExprRef a, ExprRef b) {
  return mk_op(Op::Mux, {std::move(c), std::move(a), std::move(b)});
}

ExprRef mk_cat(ExprRef hi, ExprRef lo) {
  return mk_op(Op::Cat, {std::move(hi), std::move(lo)});
}

ExprRef mk_mem_load(uint32_t mem, ExprRef addr, uint32_t data_width, bool data_sign) {
  auto e = std::make_shared<Expr>();
  e->op = Op::MemLoad;
  e->node = mem;
  e->width = data_width;
  e->sign = data_sign;
  e->children.push_back(std::move(addr));
  return e;
}

ExprRef mk_fit(ExprRef e, uint32_t width) {
  if (e->width == width) return e;
  assert(e->width < width && "mk_fit cannot truncate");
  return mk_pad(std::move(e), width);
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.width != b.width || a.sign != b.sign) return false;
  if (a.node != b.node || a.arg0 != b.arg0 || a.arg1 != b.arg1) return false;
  if (a.op == Op::Const && a.cval != b.cval) return false;
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); i++)
    if (!expr_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

ExprRef expr_rewrite(const ExprRef& e,
                     const std::function<ExprRef(const ExprRef&)>& fn) {
  ExprRef cur = e;
  bool changed = false;
  std::vector<ExprRef> kids;
  kids.reserve(e->children.size());
  for (const auto& c : e->children) {
    ExprRef nc = expr_rewrite(c, fn);
    changed |= (nc != c);
    kids.push_back(std::move(nc));
  }
  if (changed) {
    auto n = std::make_shared<Expr>(*e);
    n->children = std::move(kids);
    cur = n;
  }
  ExprRef out = fn(cur);
  return out ? out : cur;
}

void for_each_ref(const Expr& e, const std::function<void(const Expr&)>& fn) {
  if (e.op == Op::Ref) fn(e);
  for (const auto& c : e.children) for_each_ref(*c, fn);
}

bool contains_mem_load(const Expr& e) {
  if (e.op == Op::MemLoad) return true;
  for (const auto& c : e.children)
    if (contains_mem_load(*c)) return true;
  return false;
}

uint32_t count_refs_to(const Expr& e, uint32_t node) {
  uint32_t n = (e.op == Op::Ref && e.node == node) ? 1 : 0;
  for (const auto& c : e.children) n += count_refs_to(*c, node);
  return n;
}

std::string expr_to_string(const Expr& e) {
  std::ostringstream os;
  switch (e.op) {
    case Op::Const:
      os << (e.sign ? "s" : "") << e.width << "'d" << e.cval.to_decimal();
      break;
    case Op::Ref:
      os << "%" << e.node;
      break;
    case Op::MemLoad:
      os << "(memload m" << e.node << " " << expr_to_string(*e.children[0]) << ")";
      break;
    case Op::Bits:
      os << "(bits " << expr_to_string(*e.children[0]) << " " << e.arg0 << " "
         << e.arg1 << ")";
      break;
    case Op::Shl:
    case Op::Shr:
    case Op::Pad:
      os << "(" << op_name(e.op) << " " << expr_to_string(*e.children[0]) << " "
         << e.arg0 << ")";
      break;
    default: {
      os << "(" << op_name(e.op);
      for (const auto& c : e.children) os << " " << expr_to_string(*c);
      os << ")";
    }
  }
  return os.str();
}

uint64_t expr_cost(const Expr& e, const CostParams& p) {
  uint64_t total = 0;
  uint32_t basis = e.width;
  for (const auto& c : e.children) basis = std::max(basis, c->width);
  uint64_t words = (basis + p.word_bits - 1) / p.word_bits;
  switch (e.op) {
    case Op::Const:
    case Op::Ref:
    case Op::AsUInt:
    case Op::AsSInt:
      break;
    case Op::Mul:
    case Op::Div:
      total += words * p.muldiv_weight;
      break;
    default:
      total += words;
  }
  for (const auto& c : e.children) total += expr_cost(*c, p);
  return total;
}

}  // namespace actsim
