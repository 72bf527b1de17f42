#include <doctest.h>

#include "effad/errors.hpp"
#include "effad/expr.hpp"
#include "effad/handlers.hpp"
#include "effad/modes.hpp"
#include "support/ast_gen.hpp"

using namespace effad;
using namespace effad::expr;

namespace {

bool same(const AstPtr& a, const AstPtr& b) { return equal(*a, *b); }

}  // namespace

TEST_CASE("grammar shapes") {
  CHECK(same(parse("1 + x*x*x - y*y"),
             sub(add(num(1), mul(mul(var("x"), var("x")), var("x"))),
                 mul(var("y"), var("y")))));
  CHECK(same(parse("let y = 2 in checkpoint(x + y)"),
             let("y", num(2), checkpoint(add(var("x"), var("y"))))));
  CHECK(same(parse("-3"), neg(num(3))));
  CHECK(same(parse("--x"), neg(neg(var("x")))));
  CHECK(same(parse("2.5*x"), mul(num(2.5), var("x"))));
  CHECK(same(parse("a - b - c"),
             sub(sub(var("a"), var("b")), var("c"))));
  CHECK(same(parse("(a + b) * c"),
             mul(add(var("a"), var("b")), var("c"))));
  CHECK(same(parse("let u = 1 in u + 2"),
             let("u", num(1), add(var("u"), num(2)))));
  CHECK(same(parse("x * let u = 1 in u + 2"),
             mul(var("x"), let("u", num(1), add(var("u"), num(2))))));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("x +");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
  try {
    parse("1 +\n  * 2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse("x $ y"), ParseError);
  CHECK_THROWS_AS(parse("(x"), ParseError);
  CHECK_THROWS_AS(parse("x y"), ParseError);
  CHECK_THROWS_AS(parse("let = 1 in x"), ParseError);
  CHECK_THROWS_AS(parse("checkpoint x"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("keywords are not identifiers") {
  CHECK_THROWS_AS(parse("let let = 1 in 2"), ParseError);
  CHECK(same(parse("letter + inx"), add(var("letter"), var("inx"))));
}

TEST_CASE("print and parse round-trip") {
  CHECK(print(*parse("1 + x*x*x - y*y")) == "1 + x * x * x - y * y");
  CHECK(print(*parse("a - (b - c)")) == "a - (b - c)");
  CHECK(print(*parse("(let u = 1 in u) * 2")) == "(let u = 1 in u) * 2");
  testing::AstGen gen(5);
  for (int i = 0; i < 500; ++i) {
    AstPtr a = gen.next();
    std::string text = print(*a);
    CAPTURE(text);
    CHECK(same(parse(text), a));
  }
}

TEST_CASE("lowering") {
  CHECK(eval_expr(parse("1 + x*x*x - y*y"), {{"x", 2}, {"y", 4}}) == -7.0);
  CHECK(eval_expr(parse("5"), {}) == 5.0);
  CHECK_THROWS_AS(lower(parse("x + q"), {{"x", Value(1.0)}}), UnboundVariable);
  CHECK_THROWS_AS(eval_expr(parse("z"), {}), UnboundVariable);
}

TEST_CASE("lowering emits commands left to right") {
  Tracer tr;
  eval_expr(parse("1 + (x*x*x - y*y)"), {{"x", 2}, {"y", 4}}, &tr);
  std::vector<std::string> handled;
  for (const auto& e : tr.events()) {
    if (e.kind == TraceKind::Handled) handled.push_back(e.detail);
  }
  CHECK(handled == std::vector<std::string>{
                       "evaluate: ap0 (constE 1)",
                       "evaluate: ap2 timesE 2 2",
                       "evaluate: ap2 timesE 4 2",
                       "evaluate: ap2 timesE 4 4",
                       "evaluate: ap1 negateE 16",
                       "evaluate: ap2 plusE 8 (-16)",
                       "evaluate: ap2 plusE 1 (-8)",
                   });
}

TEST_CASE("numeric interpreter agrees with evaluate") {
  testing::AstGen gen(11);
  for (int i = 0; i < 300; ++i) {
    AstPtr a = gen.next();
    Bindings at = {{"x", gen.point()}, {"y", gen.point()}, {"w", gen.point()}};
    CAPTURE(print(*a));
    CHECK(num_eval(*a, real_env(at)) == eval_expr(a, at));
  }
}

TEST_CASE("symbolic derivative") {
  RealEnv at = {{"x", 2}, {"y", 4}};
  CHECK(num_eval(*symbolic_derivative(parse("1 + x*x*x - y*y"), "x"), at) ==
        12.0);
  CHECK(num_eval(*symbolic_derivative(parse("7"), "x"), at) == 0.0);
  AstPtr prog = parse(
      "let y=2 in let z=checkpoint(x+y) in "
      "let a=checkpoint(let w=checkpoint(x*z) in w+y) in a+x");
  AstPtr dprog = symbolic_derivative(prog, "x");
  for (double x : {-1.0, 0.0, 2.0, 5.0}) {
    CHECK(num_eval(*dprog, {{"x", x}}) == 2 * x + 3);
  }
}

TEST_CASE("helpers") {
  AstPtr a = parse("checkpoint(x) + let u = checkpoint(checkpoint(1)) in u");
  CHECK(count_checkpoints(*a) == 3);
  CHECK(count_checkpoints(*erase_checkpoints(a)) == 0);
  CHECK(free_variables(*a) == std::set<std::string>{"x"});
  CHECK(free_variables(*parse("let u = u in u")) ==
        std::set<std::string>{"u"});
  CHECK(same(inline_lets(parse("let u = x*2 in u + u")),
             parse("x*2 + x*2")));
}
