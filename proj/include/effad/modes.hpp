#pragma once

// Whole-expression drivers: one handler stack per differentiation mode.

#include <string>
#include <utility>
#include <vector>

#include "effad/cellstore.hpp"
#include "effad/expr.hpp"
#include "effad/trace.hpp"

namespace effad {

/// Variable bindings in the order they were given.
using Bindings = std::vector<std::pair<std::string, double>>;

enum class Mode { Evaluate, Forward, Reverse, Checkpoint };

/// Parses "evaluate", "forward", "reverse" or "checkpoint".
Mode parse_mode(const std::string& name);
std::string mode_name(Mode m);

/// evaluate over the expression with variables bound to reals.
double eval_expr(const expr::AstPtr& a, const Bindings& at,
                 Tracer* tracer = nullptr);

/// evaluate . diff with `wrt` bound to dual(v, 1) and every other variable
/// to dual(v, 0). Returns the resulting dual.
Value forward_dual(const expr::AstPtr& a, const Bindings& at,
                   const std::string& wrt, Tracer* tracer = nullptr);

struct GradientRun {
  double gradient = 0;
  std::size_t peak_live = 0;
  std::size_t allocations = 0;
  std::vector<WriteRecord> writes;
};

/// grad (or gradc when `checkpointed`) with respect to `wrt`. The other
/// variables enter the differentiated program as constants, in binding
/// order. Without `checkpointed`, checkpoint markers are erased.
GradientRun reverse_gradient(const expr::AstPtr& a, const Bindings& at,
                             const std::string& wrt, bool checkpointed,
                             Tracer* tracer = nullptr);

/// Dispatches to the driver of `mode` (Evaluate is rejected).
double gradient(Mode mode, const expr::AstPtr& a, const Bindings& at,
                const std::string& wrt, Tracer* tracer = nullptr);

expr::RealEnv real_env(const Bindings& at);

}  // namespace effad
