#pragma once

#include "effad/command.hpp"
#include "effad/effects.hpp"

namespace effad {

// Smart constructors. Each emits one Smooth command at depth 0, i.e. to the
// innermost enclosing Smooth handler.
Comp c(double i);
Comp n(Value x);
Comp p(Value x, Value y);
Comp t(Value x, Value y);

// Dispatch of a smooth function applied to arguments. Inside a handler
// clause these reach the next handler out, since a clause body runs in the
// handler's output.
Comp op0(Nullary f);
Comp op1(Unary f, Value x);
Comp op2(Binary f, Value x, Value y);

// Partial derivatives as computations over the same layer as the arguments.
//   d/dx (-x)    = -1
//   d/dx (x + y) = 1,   d/dy (x + y) = 1
//   d/dx (x * y) = y,   d/dy (x * y) = x
Comp der1(Unary f, Value x);
Comp der2L(Binary f, Value x, Value y);
Comp der2R(Binary f, Value x, Value y);

/// Real-valued primal semantics used by `evaluate`.
double apply_real(Unary f, double x);
double apply_real(Binary f, double x, double y);

/// Checks that every unary and binary function has its derivative rows.
/// Throws EngineError otherwise.
void check_derivative_tables();

}  // namespace effad
