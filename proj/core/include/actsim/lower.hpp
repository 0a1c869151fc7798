#pragma once

#include "actsim/firrtl_ast.hpp"
#include "actsim/graph.hpp"

namespace actsim {

struct LowerOptions {
  uint32_t max_width = 1024;
};

// Lowers a flattened, normalized AST to an RtlGraph. Registers split into
// read/write pairs; registers with reset keep the mux(reset, init, next)
// form until the reset pass strips it.
RtlGraph lower(const FirrtlAst& ast, DiagEngine& diags,
               const LowerOptions& opts = {});

}  // namespace actsim
