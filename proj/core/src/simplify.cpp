#include "actsim/eval.hpp"
#include "actsim/passes.hpp"

namespace actsim {

namespace {

bool is_const(const Expr& e) { return e.op == Op::Const; }

bool is_const_zero(const Expr& e) { return is_const(e) && e.cval.is_zero(); }

bool is_const_ones(const Expr& e) { return is_const(e) && wv_all_ones(e.cval); }

bool is_const_one(const Expr& e) {
  return is_const(e) &&
         wv_compare_u(e.cval, WideValue::from_u64(e.cval.width(), 1)) == 0;
}

// Value-preserving width fit of `e` to (width, sign): pad + reinterpret.
// Used when a rewrite replaces an operator with one of its operands.
ExprRef refit(ExprRef e, uint32_t width, bool sign) {
  if (e->width < width) e = mk_pad(e, width);
  if (e->sign != sign) e = mk_op(sign ? Op::AsSInt : Op::AsUInt, {std::move(e)});
  return e;
}

struct RuleStats {
  size_t rewrites = 0;
  size_t onehot = 0;
};

// One bottom-up rewrite application. Returns nullptr to keep the node.
ExprRef apply_rules(const ExprRef& e, const RtlGraph& g, RuleStats& st) {
  const uint32_t w = e->width;
  const bool sg = e->sign;

  // Constant folding for any pure operator over constant children.
  if (e->op != Op::Const && e->op != Op::Ref && e->op != Op::MemLoad) {
    bool all_const = true;
    for (const auto& c : e->children)
      if (!is_const(*c)) {
        all_const = false;
        break;
      }
    if (all_const && !e->children.empty()) {
      st.rewrites++;
      return mk_const(eval_const_expr(*e), sg);
    }
  }

  switch (e->op) {
    case Op::Mux: {
      const Expr& c = *e->children[0];
      if (is_const(c)) {
        st.rewrites++;
        const ExprRef& arm = c.cval.is_zero() ? e->children[2] : e->children[1];
        return refit(arm, w, sg);
      }
      if (expr_equal(*e->children[1], *e->children[2])) {
        st.rewrites++;
        return refit(e->children[1], w, sg);
      }
      // mux(c, 1, 0) at width 1 is just c.
      if (w == 1 && is_const_one(*e->children[1]) && is_const_zero(*e->children[2])) {
        st.rewrites++;
        return e->children[0];
      }
      break;
    }
    case Op::And: {
      if (is_const_zero(*e->children[0]) || is_const_zero(*e->children[1])) {
        st.rewrites++;
        return mk_const(WideValue(w), sg);
      }
      for (int i = 0; i < 2; i++) {
        const Expr& k = *e->children[i];
        if (is_const_ones(k) && k.width == w) {
          st.rewrites++;
          return refit(e->children[1 - i], w, sg);
        }
      }
      break;
    }
    case Op::Or:
    case Op::Xor: {
      for (int i = 0; i < 2; i++) {
        if (is_const_zero(*e->children[i])) {
          st.rewrites++;
          return refit(e->children[1 - i], w, sg);
        }
      }
      break;
    }
    case Op::Add: {
      for (int i = 0; i < 2; i++) {
        if (is_const_zero(*e->children[i])) {
          st.rewrites++;
          return refit(e->children[1 - i], w, sg);
        }
      }
      break;
    }
    case Op::Sub:
      if (is_const_zero(*e->children[1])) {
        st.rewrites++;
        return refit(e->children[0], w, sg);
      }
      break;
    case Op::Shl:
    case Op::Shr:
      if (e->arg0 == 0) {
        st.rewrites++;
        return e->children[0];
      }
      break;
    case Op::Pad:
      if (e->arg0 <= e->children[0]->width) {
        st.rewrites++;
        return e->children[0];
      }
      break;
    case Op::Bits: {
      const ExprRef& a = e->children[0];
      // Full-width extraction is a reinterpret.
      if (e->arg1 == 0 && e->arg0 == a->width - 1) {
        st.rewrites++;
        return refit(a, w, sg);
      }
      // bits of bits composes.
      if (a->op == Op::Bits) {
        st.rewrites++;
        return mk_bits(a->children[0], a->arg1 + e->arg0, a->arg1 + e->arg1);
      }
      // bits of cat lands entirely in one operand.
      if (a->op == Op::Cat) {
        uint32_t lo_w = a->children[1]->width;
        if (e->arg0 < lo_w) {
          st.rewrites++;
          return mk_bits(a->children[1], e->arg0, e->arg1);
        }
        if (e->arg1 >= lo_w) {
          st.rewrites++;
          return mk_bits(a->children[0], e->arg0 - lo_w, e->arg1 - lo_w);
        }
      }
      // One-hot check: bits(dshl(1, A), k, k) -> eq(A, k); also reaches
      // through a named node holding the dshl.
      if (e->arg0 == e->arg1) {
        const Expr* src = a.get();
        if (src->op == Op::Ref) {
          const RtlNode& n = g.node(src->node);
          if (n.alive && n.expr) src = n.expr.get();
        }
        if (src->op == Op::Dshl && is_const_one(*src->children[0])) {
          const ExprRef& idx = src->children[1];
          uint32_t k = e->arg0;
          uint32_t kw = 1;
          while ((uint64_t{1} << kw) <= k) kw++;
          st.rewrites++;
          st.onehot++;
          return mk_op(Op::Eq, {idx, mk_const_u64(kw, k)});
        }
      }
      break;
    }
    default:
      break;
  }
  return nullptr;
}

ExprRef simplify_one(const ExprRef& e, const RtlGraph& g, RuleStats& st) {
  ExprRef cur = e;
  for (int iter = 0; iter < 16; iter++) {
    size_t before = st.rewrites;
    cur = expr_rewrite(cur, [&](const ExprRef& x) { return apply_rules(x, g, st); });
    if (st.rewrites == before) break;
  }
  return cur;
}

}  // namespace

void simplify_expressions(RtlGraph& g, PassReport* report) {
  RuleStats st;
  for (auto& n : g.nodes) {
    if (!n.alive || !n.expr) continue;
    n.expr = simplify_one(n.expr, g, st);
  }
  if (report) {
    report->simplify_rewrites += st.rewrites;
    report->onehot_rewrites += st.onehot;
  }
}

}  // namespace actsim
