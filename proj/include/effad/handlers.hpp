#pragma once

// The AD handlers.
//
//   evaluate   Smooth over reals, plain arithmetic. Always the outermost.
//   diff       Smooth over duals, forward mode.
//   reverse    Smooth over props: each operation allocates an adjoint cell,
//              resumes the rest of the program, and accumulates into its
//              arguments' cells once that rest has finished.
//   evaluatet  Smooth + Checkpoint over props, primal values only, every
//              result sharing one scratch cell.
//   reversec   Smooth + Checkpoint over props, reverse mode that replays
//              checkpointed bodies instead of keeping their cells live.
//
// Arithmetic performed inside a clause is emitted as Smooth commands to the
// next handler out, so the derivative bookkeeping of a layer is itself a
// program run by the layer below.

#include <cstdint>
#include <functional>

#include "effad/cellstore.hpp"
#include "effad/effects.hpp"
#include "effad/smooth.hpp"
#include "effad/trace.hpp"
#include "effad/value.hpp"

namespace effad {

/// State shared by the handlers of one run. Must outlive every computation
/// built against it.
class Session {
 public:
  explicit Session(Tracer* tracer = nullptr) : store(tracer), tracer(tracer) {}
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  CellStore store;
  Tracer* tracer;

  std::uint64_t next_checkpoint() { return ++checkpoints_; }

 private:
  std::uint64_t checkpoints_ = 0;
};

/// A unary program over some layer.
using Program = std::function<Comp(Value)>;

HandlerRef evaluate_handler(Tracer* tracer = nullptr);
Comp evaluate(Comp c, Tracer* tracer = nullptr);

HandlerRef diff_handler(Tracer* tracer = nullptr);
Comp diff(Comp c, Tracer* tracer = nullptr);

/// Embeds a value of the enclosing layer as a constant dual. The zero
/// tangent is produced one layer out.
Comp lift(Value x);

/// Derivative of `f` at `x`, by forward mode. The seed is produced one layer
/// out, so `d` nests.
Comp d(Program f, Value x, Tracer* tracer = nullptr);

Comp reverse(Session& s, Comp c);
Comp grad(Session& s, Program f, Value x);

Comp evaluatet(Session& s, CellId scratch, Comp c);
Comp reversec(Session& s, Comp c);
Comp gradc(Session& s, Program f, Value x);

/// Emits a checkpoint request for `body`, which must produce a Prop.
Comp checkpoint(Thunk body);

}  // namespace effad
