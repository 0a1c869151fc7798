#pragma once
// Width-annotated operator trees. Immutable nodes shared between graphs;
// passes rebuild the spine they change and share the rest.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "actsim/wide_value.hpp"

namespace actsim {

enum class Op : uint8_t {
  Const,
  Ref,
  Add,
  Sub,
  Mul,
  Div,
  Rem,
  Lt,
  Leq,
  Gt,
  Geq,
  Eq,
  Neq,
  And,
  Or,
  Xor,
  Not,
  AndR,
  OrR,
  XorR,
  Shl,
  Shr,
  Dshl,
  Dshr,
  Cat,
  Bits,
  Pad,
  Mux,
  Cvt,
  AsUInt,
  AsSInt,
  MemLoad,  // combinational read of memory `mem` at address child[0]
};

const char* op_name(Op op);

struct Expr;
using ExprRef = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::Const;
  bool sign = false;
  uint32_t width = 0;
  uint32_t node = 0;  // Ref: node id; MemLoad: memory id
  uint32_t arg0 = 0;  // Shl/Shr/Dshl-amount n; Bits hi; Pad n
  uint32_t arg1 = 0;  // Bits lo
  WideValue cval;     // Const only
  std::vector<ExprRef> children;
};

// Result width/signedness per the FIRRTL primitive-op rules.
struct OpSig {
  uint32_t width = 0;
  bool sign = false;
};
// Returns nullopt and fills `err` when the combination is illegal
// (e.g. mismatched operand signedness, bits hi >= operand width).
std::optional<OpSig> infer_sig(Op op, const std::vector<ExprRef>& children,
                               uint32_t arg0, uint32_t arg1, std::string* err);

ExprRef mk_const(WideValue v, bool sign = false);
ExprRef mk_const_u64(uint32_t width, uint64_t v);
ExprRef mk_ref(uint32_t node, uint32_t width, bool sign);
ExprRef mk_op(Op op, std::vector<ExprRef> children, uint32_t arg0 = 0, uint32_t arg1 = 0);
ExprRef mk_bits(ExprRef e, uint32_t hi, uint32_t lo);
ExprRef mk_pad(ExprRef e, uint32_t n);
ExprRef mk_mux(ExprRef c, ExprRef a, ExprRef b);
ExprRef mk_cat(ExprRef hi, ExprRef lo);
ExprRef mk_mem_load(uint32_t mem, ExprRef addr, uint32_t data_width, bool data_sign);

// Zero-extends or sign-extends `e` to `width` (inserting pad/cat as needed);
// no-op when widths already match.
ExprRef mk_fit(ExprRef e, uint32_t width);

bool expr_equal(const Expr& a, const Expr& b);

// Post-order rewrite. `fn` sees each node after its children were rewritten;
// returning nullptr keeps the node.
ExprRef expr_rewrite(const ExprRef& e,
                     const std::function<ExprRef(const ExprRef&)>& fn);

void for_each_ref(const Expr& e, const std::function<void(const Expr&)>& fn);
bool contains_mem_load(const Expr& e);
uint32_t count_refs_to(const Expr& e, uint32_t node);

std::string expr_to_string(const Expr& e);

struct CostParams {
  uint32_t cost_node = 2;                      // overhead of materializing a node
  uint32_t activation_branchless_threshold = 8;
  uint32_t word_bits = 64;
  uint32_t muldiv_weight = 4;
  uint32_t max_slices = 8;
};

// Weighted operator count; refs and consts are free.
uint64_t expr_cost(const Expr& e, const CostParams& p = {});

}  // namespace actsim
