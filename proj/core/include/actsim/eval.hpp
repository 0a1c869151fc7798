#pragma once
// Expression evaluation per FIRRTL primitive-op semantics. Total given a
// defined environment: division/remainder by zero yield 0.

#include "actsim/expr.hpp"
#include "actsim/wide_value.hpp"

namespace actsim {

class EvalEnv {
public:
  virtual ~EvalEnv() = default;
  virtual const WideValue& node_value(uint32_t id) const = 0;
  virtual WideValue mem_load(uint32_t mem, const WideValue& addr) const;
};

WideValue eval_expr(const Expr& e, const EvalEnv& env);

// Folds an expression containing no refs or memory loads.
WideValue eval_const_expr(const Expr& e);

}  // namespace actsim
