#include "actsim/eval.hpp"

#include <cassert>
#include <stdexcept>

namespace actsim {

WideValue EvalEnv::mem_load(uint32_t, const WideValue&) const {
  throw std::logic_error("expression references a memory but the environment has none");
}

namespace {

// Magnitude of a possibly-negative two's-complement pattern.
WideValue magnitude(const WideValue& v, bool sign) {
  if (sign && v.sign_bit()) return v.negated();
  return v;
}

int compare_typed(const WideValue& a, bool as, const WideValue& b, bool bs) {
  uint32_t w = std::max(a.width(), b.width());
  WideValue ea = a.extended(w, as);
  WideValue eb = b.extended(w, bs);
  bool na = as && ea.sign_bit();
  bool nb = bs && eb.sign_bit();
  if (na != nb) return na ? -1 : 1;
  return wv_compare_u(ea, eb);
}

WideValue bool_val(bool b) { return WideValue::from_u64(1, b ? 1 : 0); }

// Shift amount as a saturated u64 (anything >= cap behaves the same).
uint64_t shift_amount(const WideValue& v, uint64_t cap) {
  for (uint32_t i = 1; i < v.num_words(); i++)
    if (v.word(i) != 0) return cap;
  uint64_t lo = v.low_u64();
  return lo > cap ? cap : lo;
}

}  // namespace

WideValue eval_expr(const Expr& e, const EvalEnv& env) {
  switch (e.op) {
    case Op::Const:
      return e.cval;
    case Op::Ref: {
      const WideValue& v = env.node_value(e.node);
      assert(v.width() == e.width);
      return v;
    }
    case Op::MemLoad:
      return env.mem_load(e.node, eval_expr(*e.children[0], env));
    case Op::Add:
    case Op::Sub: {
      WideValue a = eval_expr(*e.children[0], env).extended(e.width, e.children[0]->sign);
      WideValue b = eval_expr(*e.children[1], env).extended(e.width, e.children[1]->sign);
      return e.op == Op::Add ? wv_add(a, b) : wv_sub(a, b);
    }
    case Op::Mul: {
      WideValue a = eval_expr(*e.children[0], env).extended(e.width, e.children[0]->sign);
      WideValue b = eval_expr(*e.children[1], env).extended(e.width, e.children[1]->sign);
      return wv_mul(a, b, e.width);
    }
    case Op::Div: {
      WideValue a = eval_expr(*e.children[0], env);
      WideValue b = eval_expr(*e.children[1], env);
      if (b.is_zero()) return WideValue(e.width);
      if (!e.sign) {
        WideValue q, r;
        wv_divmod_u(a, b, q, r);
        return q.extended(e.width, false);
      }
      bool sa = a.sign_bit(), sb = b.sign_bit();
      WideValue q, r;
      wv_divmod_u(magnitude(a, true), magnitude(b, true), q, r);
      WideValue qe = q.extended(e.width, false);
      return (sa != sb) ? qe.negated() : qe;
    }
    case Op::Rem: {
      WideValue a = eval_expr(*e.children[0], env);
      WideValue b = eval_expr(*e.children[1], env);
      if (b.is_zero()) return WideValue(e.width);
      WideValue q, r;
      if (!e.sign) {
        wv_divmod_u(a, b, q, r);
        return r.extended(e.width, false);
      }
      bool sa = a.sign_bit();
      wv_divmod_u(magnitude(a, true), magnitude(b, true), q, r);
      WideValue re = r.extended(e.width, false);
      return sa ? re.negated() : re;
    }
    case Op::Lt:
    case Op::Leq:
    case Op::Gt:
    case Op::Geq: {
      const Expr& c0 = *e.children[0];
      const Expr& c1 = *e.children[1];
      int c = compare_typed(eval_expr(c0, env), c0.sign, eval_expr(c1, env), c1.sign);
      switch (e.op) {
        case Op::Lt: return bool_val(c < 0);
        case Op::Leq: return bool_val(c <= 0);
        case Op::Gt: return bool_val(c > 0);
        default: return bool_val(c >= 0);
      }
    }
    case Op::Eq:
    case Op::Neq: {
      const Expr& c0 = *e.children[0];
      const Expr& c1 = *e.children[1];
      int c = compare_typed(eval_expr(c0, env), c0.sign, eval_expr(c1, env), c1.sign);
      return bool_val(e.op == Op::Eq ? c == 0 : c != 0);
    }
    case Op::And:
    case Op::Or:
    case Op::Xor: {
      WideValue a = eval_expr(*e.children[0], env).extended(e.width, e.children[0]->sign);
      WideValue b = eval_expr(*e.children[1], env).extended(e.width, e.children[1]->sign);
      if (e.op == Op::And) return wv_and(a, b);
      if (e.op == Op::Or) return wv_or(a, b);
      return wv_xor(a, b);
    }
    case Op::Not:
      return wv_not(eval_expr(*e.children[0], env));
    case Op::AndR:
      return bool_val(wv_all_ones(eval_expr(*e.children[0], env)));
    case Op::OrR:
      return bool_val(!eval_expr(*e.children[0], env).is_zero());
    case Op::XorR:
      return bool_val(wv_parity(eval_expr(*e.children[0], env)));
    case Op::Shl:
      return wv_shift_left(eval_expr(*e.children[0], env), e.arg0, e.width);
    case Op::Shr: {
      const Expr& c0 = *e.children[0];
      WideValue v = eval_expr(c0, env);
      if (e.arg0 >= c0.width) {
        WideValue r(1);
        if (c0.sign && v.sign_bit()) r.set_bit(0, true);
        return r;
      }
      return wv_shift_right(v, e.arg0, e.width);
    }
    case Op::Dshl: {
      WideValue v = eval_expr(*e.children[0], env);
      uint64_t n = shift_amount(eval_expr(*e.children[1], env), e.width);
      return wv_shift_left(v, n, e.width);
    }
    case Op::Dshr: {
      const Expr& c0 = *e.children[0];
      WideValue v = eval_expr(c0, env);
      uint64_t n = shift_amount(eval_expr(*e.children[1], env), e.width);
      bool neg = c0.sign && v.sign_bit();
      if (n >= e.width) {
        WideValue r(e.width);
        if (neg) {
          r = wv_not(r);  // all ones
        }
        return r;
      }
      WideValue r = wv_shift_right(v, n, e.width);
      if (neg && n > 0) {
        // Fill the vacated top bits with the sign.
        for (uint32_t i = e.width - (uint32_t)n; i < e.width; i++) r.set_bit(i, true);
      }
      return r;
    }
    case Op::Cat:
      return wv_cat(eval_expr(*e.children[0], env), eval_expr(*e.children[1], env));
    case Op::Bits:
      return wv_extract(eval_expr(*e.children[0], env), e.arg0, e.arg1);
    case Op::Pad:
      return eval_expr(*e.children[0], env).extended(e.width, e.children[0]->sign);
    case Op::Mux: {
      const WideValue c = eval_expr(*e.children[0], env);
      const Expr& arm = c.is_zero() ? *e.children[2] : *e.children[1];
      return eval_expr(arm, env).extended(e.width, arm.sign);
    }
    case Op::Cvt:
      return eval_expr(*e.children[0], env).extended(e.width, e.children[0]->sign);
    case Op::AsUInt:
    case Op::AsSInt:
      return eval_expr(*e.children[0], env);
  }
  return WideValue(e.width);
}

namespace {

class EmptyEnv final : public EvalEnv {
public:
  const WideValue& node_value(uint32_t) const override {
    throw std::logic_error("constant expression references a node");
  }
};

}  // namespace

WideValue eval_const_expr(const Expr& e) {
  EmptyEnv env;
  return eval_expr(e, env);
}

}  // namespace actsim
