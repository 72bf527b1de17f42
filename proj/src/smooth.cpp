#include "effad/smooth.hpp"

#include <fmt/format.h>

namespace effad {

Comp c(double i) { return perform(smooth_command(Ap0{ConstE{i}})); }
Comp n(Value x) {
  return perform(smooth_command(Ap1{Unary::NegateE, std::move(x)}));
}
Comp p(Value x, Value y) {
  return perform(
      smooth_command(Ap2{Binary::PlusE, std::move(x), std::move(y)}));
}
Comp t(Value x, Value y) {
  return perform(
      smooth_command(Ap2{Binary::TimesE, std::move(x), std::move(y)}));
}

Comp op0(Nullary f) { return c(f.value); }

Comp op1(Unary f, Value x) {
  switch (f) {
    case Unary::NegateE:
      return n(std::move(x));
  }
  throw EngineError("op1: unknown unary function");
}

Comp op2(Binary f, Value x, Value y) {
  switch (f) {
    case Binary::PlusE:
      return p(std::move(x), std::move(y));
    case Binary::TimesE:
      return t(std::move(x), std::move(y));
  }
  throw EngineError("op2: unknown binary function");
}

Comp der1(Unary f, Value) {
  switch (f) {
    case Unary::NegateE:
      return c(-1);
  }
  throw EngineError("der1: missing row for " + unary_name(f));
}

Comp der2L(Binary f, Value, Value y) {
  switch (f) {
    case Binary::PlusE:
      return c(1);
    case Binary::TimesE:
      return Comp::pure(std::move(y));
  }
  throw EngineError("der2L: missing row for " + binary_name(f));
}

Comp der2R(Binary f, Value x, Value) {
  switch (f) {
    case Binary::PlusE:
      return c(1);
    case Binary::TimesE:
      return Comp::pure(std::move(x));
  }
  throw EngineError("der2R: missing row for " + binary_name(f));
}

double apply_real(Unary f, double x) {
  switch (f) {
    case Unary::NegateE:
      return -x;
  }
  throw EngineError("apply_real: unknown unary function");
}

double apply_real(Binary f, double x, double y) {
  switch (f) {
    case Binary::PlusE:
      return x + y;
    case Binary::TimesE:
      return x * y;
  }
  throw EngineError("apply_real: unknown binary function");
}

void check_derivative_tables() {
  // Each row must produce a computation; a missing row throws.
  for (Unary u : kAllUnary) {
    (void)der1(u, 0.0);
    (void)apply_real(u, 0.0);
  }
  for (Binary b : kAllBinary) {
    (void)der2L(b, 0.0, 0.0);
    (void)der2R(b, 0.0, 0.0);
    (void)apply_real(b, 0.0, 0.0);
  }
}

}  // namespace effad
