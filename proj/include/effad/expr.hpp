#pragma once

// Textual expressions over the smooth signature.
//
//   expr   := term (("+" | "-") term)*
//   term   := factor ("*" factor)*
//   factor := "-" factor | NUMBER | IDENT | "(" expr ")"
//           | "let" IDENT "=" expr "in" expr
//           | "checkpoint" "(" expr ")"
//
// Binary operators are left-associative. NUMBER is a decimal literal with an
// optional fraction; a leading minus is always the negation operator.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "effad/effects.hpp"

namespace effad::expr {

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Num {
  double value;
};
struct Var {
  std::string name;
};
struct Neg {
  AstPtr arg;
};
struct Add {
  AstPtr lhs, rhs;
};
struct Sub {
  AstPtr lhs, rhs;
};
struct Mul {
  AstPtr lhs, rhs;
};
struct Let {
  std::string name;
  AstPtr bound, body;
};
struct Checkpoint {
  AstPtr body;
};

struct Ast {
  std::variant<Num, Var, Neg, Add, Sub, Mul, Let, Checkpoint> node;
};

AstPtr num(double v);
AstPtr var(std::string name);
AstPtr neg(AstPtr a);
AstPtr add(AstPtr l, AstPtr r);
AstPtr sub(AstPtr l, AstPtr r);
AstPtr mul(AstPtr l, AstPtr r);
AstPtr let(std::string name, AstPtr bound, AstPtr body);
AstPtr checkpoint(AstPtr body);

bool equal(const Ast& a, const Ast& b);

/// Throws ParseError with the 1-based line and column of the offending token.
AstPtr parse(std::string_view text);

/// Minimal-parenthesis rendering; parse(print(a)) is structurally a.
std::string print(const Ast& a);

std::set<std::string> free_variables(const Ast& a);

/// Number of Checkpoint nodes.
int count_checkpoints(const Ast& a);

/// Replaces every checkpoint(e) by e.
AstPtr erase_checkpoints(const AstPtr& a);

using ValueEnv = std::map<std::string, Value>;
using RealEnv = std::map<std::string, double>;

struct LowerOptions {
  /// Emit Checkpoint commands; otherwise checkpoint(e) lowers as e.
  bool emit_checkpoints = false;
};

/// Lowers to a computation emitting Smooth commands left to right. Variables
/// take their values from `env`, whose entries must all belong to the layer
/// the computation will be handled at. Throws UnboundVariable.
Comp lower(const AstPtr& a, const ValueEnv& env, LowerOptions opts = {});

/// Direct interpreter over reals; checkpoints are transparent.
double num_eval(const Ast& a, const RealEnv& env);

/// Symbolic derivative over {+, -, *, neg}. Lets are substituted away and
/// checkpoints dropped, so the result contains neither.
AstPtr symbolic_derivative(const AstPtr& a, const std::string& wrt);

/// Substitutes every let-bound variable by its (inlined) definition.
AstPtr inline_lets(const AstPtr& a);

}  // namespace effad::expr
