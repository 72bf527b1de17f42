#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "effad/expr.hpp"
#include "effad/handlers.hpp"
#include "effad/modes.hpp"
#include "effad/smooth.hpp"
#include "support/ast_gen.hpp"

using namespace effad;

namespace {

// 1 + x*x*x + (-(y*y)), built by hand so these tests do not go through the
// parser.
Comp running(Value x, Value y) {
  return bind(c(1), [x, y](Value one) {
    return bind(t(x, x), [=](Value xx) {
      return bind(t(xx, x), [=](Value xxx) {
        return bind(t(y, y), [=](Value yy) {
          return bind(n(yy), [=](Value ny) {
            return bind(p(xxx, ny), [=](Value rest) { return p(one, rest); });
          });
        });
      });
    });
  });
}

Value ev(Comp c) { return run_pure(evaluate(std::move(c))); }

const char* kCheckpointProgram =
    "let y=2 in let z=checkpoint(x+y) in "
    "let a=checkpoint(let w=checkpoint(x*z) in w+y) in a+x";

}  // namespace

TEST_CASE("evaluate") {
  CHECK(ev(running(2.0, 4.0)).real() == -7.0);
  CHECK(ev(c(1)).real() == 1.0);
  CHECK(ev(bind(t(2.0, 2.0), [](Value v) { return t(v, 2.0); })).real() ==
        8.0);
}

TEST_CASE("diff") {
  Value r = ev(diff(running(make_dual(2.0, 1.0), make_dual(4.0, 0.0))));
  REQUIRE(r.is_dual());
  CHECK(r.dual().primal.real() == -7.0);
  CHECK(r.dual().tangent.real() == 12.0);

  Value one = ev(diff(c(1)));
  CHECK(one.dual().primal.real() == 1.0);
  CHECK(one.dual().tangent.real() == 0.0);

  Value sq = ev(diff(t(make_dual(3.0, 1.0), make_dual(3.0, 1.0))));
  CHECK(sq.dual().primal.real() == 9.0);
  CHECK(sq.dual().tangent.real() == 6.0);
}

TEST_CASE("d and lift") {
  auto square = [](Value x) { return t(x, x); };
  CHECK(ev(bind(c(3), [square](Value x) { return d(square, x); })).real() ==
        6.0);
  CHECK(ev(bind(c(5), [](Value x) {
          return d([](Value v) { return Comp::pure(v); }, x);
        })).real() == 1.0);

  auto nested = [](bool with_lift) {
    return bind(c(1), [with_lift](Value one) {
      return d(
          [with_lift](Value x) {
            return bind(c(1), [x, with_lift](Value inner_one) {
              Program g = [x, with_lift](Value y) {
                if (!with_lift) return p(x, y);
                return bind(lift(x), [y](Value lx) { return p(lx, y); });
              };
              return bind(d(g, inner_one),
                          [x](Value dy) { return t(x, dy); });
            });
          },
          one);
    });
  };
  CHECK(ev(nested(true)).real() == 1.0);
  CHECK_THROWS_AS(ev(nested(false)), LayerMismatch);
}

TEST_CASE("reverse over forward is rejected") {
  Session s;
  Program f = [](Value z) { return diff(t(make_dual(z, 1.0), z)); };
  CHECK_THROWS_AS(ev(grad(s, f, 2.0)), LayerMismatch);
}

TEST_CASE("reverse: single product accumulates into one cell") {
  Session s;
  Program sq = [](Value z) { return t(z, z); };
  CHECK(ev(grad(s, sq, 2.0)).real() == 4.0);

  Session s2;
  s2.store.enable_write_log();
  Program id = [](Value z) { return Comp::pure(z); };
  CHECK(ev(grad(s2, id, 9.0)).real() == 1.0);
  REQUIRE(s2.store.write_log().size() == 1);
  CHECK(s2.store.write_log()[0].kind == WriteKind::Seed);
}

TEST_CASE("reverse: ap0 creates a zero cell and defers nothing") {
  Session s;
  s.store.enable_write_log();
  Value got;
  Comp run = reverse(s, bind(c(4), [&got](Value v) {
                       got = v;
                       return Comp::pure();
                     }));
  ev(std::move(run));
  REQUIRE(got.is_prop());
  CHECK(got.prop().primal.real() == 4.0);
  CHECK(s.store.read(got.prop().adjoint) == 0.0);
  CHECK(s.store.write_log().empty());
}

TEST_CASE("grad of the running example") {
  Session s;
  s.store.enable_write_log();
  Program fx = [](Value x) {
    return bind(c(4), [x](Value y) { return running(x, y); });
  };
  CHECK(ev(grad(s, fx, 2.0)).real() == 12.0);

  Session s2;
  Program fy = [](Value y) {
    return bind(c(2), [y](Value x) { return running(x, y); });
  };
  CHECK(ev(grad(s2, fy, 4.0)).real() == -8.0);
}

TEST_CASE("write order is last-in first-out") {
  // z is cell 0; the remaining cells are numbered in allocation order, so
  // cell i plays the role of r_i in the hand-written backward pass.
  Session s;
  s.store.enable_write_log();
  Program fx = [](Value x) {
    return bind(c(4), [x](Value y) {
      return bind(c(1), [x, y](Value one) {
        return bind(t(x, x), [=](Value xx) {
          return bind(t(xx, x), [=](Value xxx) {
            return bind(t(y, y), [=](Value yy) {
              return bind(n(yy), [=](Value ny) {
                return bind(p(xxx, ny),
                            [=](Value rest) { return p(one, rest); });
              });
            });
          });
        });
      });
    });
  };
  CHECK(ev(grad(s, fx, 2.0)).real() == 12.0);
  const auto& log = s.store.write_log();
  REQUIRE(log.size() == 12);
  CHECK(log[0].kind == WriteKind::Seed);
  CHECK(log[0].cell.index == 8);
  CHECK(log[0].value == 1.0);
  std::vector<std::uint64_t> order;
  for (std::size_t i = 1; i < log.size(); ++i) {
    CHECK(log[i].kind == WriteKind::Accumulate);
    order.push_back(log[i].cell.index);
  }
  CHECK(order == std::vector<std::uint64_t>{2, 7, 4, 6, 5, 1, 1, 3, 0, 0, 0});
}

TEST_CASE("evaluatet shares the scratch cell") {
  Session s;
  CellId scratch = s.store.new_cell(0);
  CellId a = s.store.new_cell(0);
  CellId b = s.store.new_cell(0);
  Value r = ev(evaluatet(s, scratch, p(Prop{2.0, a}, Prop{2.0, b})));
  REQUIRE(r.is_prop());
  CHECK(r.prop().primal.real() == 4.0);
  CHECK(r.prop().adjoint == scratch);

  Value k = ev(evaluatet(s, scratch, c(7)));
  CHECK(k.prop().primal.real() == 7.0);
  CHECK(k.prop().adjoint == scratch);

  std::size_t before = s.store.total_allocations();
  Value x = Prop{3.0, a};
  Comp nested = checkpoint(Thunk([x] {
    return bind(checkpoint(Thunk([x] { return t(x, x); })),
                [](Value v) { return p(v, v); });
  }));
  Value res = ev(evaluatet(s, scratch, nested));
  CHECK(res.prop().primal.real() == 18.0);
  CHECK(s.store.total_allocations() == before);
  CHECK(s.store.live_count() == 3);
}

TEST_CASE("gradc") {
  Session s;
  Program id = [](Value z) { return Comp::pure(z); };
  CHECK(ev(gradc(s, id, 3.0)).real() == 1.0);

  auto ast = expr::parse(kCheckpointProgram);
  GradientRun ck = reverse_gradient(ast, {{"x", 2.0}}, "x", true);
  GradientRun plain = reverse_gradient(ast, {{"x", 2.0}}, "x", false);
  CHECK(ck.gradient == 7.0);
  CHECK(plain.gradient == 7.0);
  CHECK(ck.peak_live < plain.peak_live);
}

TEST_CASE("a checkpoint that reuses earlier results") {
  auto ast = expr::parse("let a = x*x in checkpoint(a+1)*a");
  // d/dx (x^2+1) x^2 = 4x^3 + 2x
  CHECK(reverse_gradient(ast, {{"x", 2.0}}, "x", true).gradient == 36.0);
  CHECK(reverse_gradient(expr::parse("checkpoint(x)*x"), {{"x", 3.0}}, "x",
                         true)
            .gradient == 6.0);
}

TEST_CASE("exactly one seed per run") {
  for (bool ck : {false, true}) {
    GradientRun r = reverse_gradient(expr::parse(kCheckpointProgram),
                                     {{"x", 2.0}}, "x", ck);
    auto seeds = std::count_if(r.writes.begin(), r.writes.end(),
                               [](const WriteRecord& w) {
                                 return w.kind == WriteKind::Seed;
                               });
    CHECK(seeds == 1);
  }
}

TEST_CASE("reversec equals reverse without checkpoints") {
  testing::GenOptions opts;
  opts.checkpoints = false;
  testing::AstGen gen(17, opts);
  for (int i = 0; i < 100; ++i) {
    auto ast = gen.next();
    Bindings at = {{"x", gen.point()}, {"y", gen.point()}, {"w", gen.point()}};
    CAPTURE(expr::print(*ast));
    GradientRun a = reverse_gradient(ast, at, "x", false);
    GradientRun b = reverse_gradient(ast, at, "x", true);
    CHECK(a.gradient == b.gradient);
    CHECK(a.peak_live == b.peak_live);
    REQUIRE(a.writes.size() == b.writes.size());
    for (std::size_t j = 0; j < a.writes.size(); ++j) {
      CHECK(a.writes[j].cell == b.writes[j].cell);
      CHECK(a.writes[j].value == b.writes[j].value);
    }
  }
}

TEST_CASE("checkpointing never raises peak memory") {
  testing::AstGen gen(29);
  for (int i = 0; i < 200; ++i) {
    auto ast = gen.next();
    Bindings at = {{"x", gen.point()}, {"y", gen.point()}, {"w", gen.point()}};
    CAPTURE(expr::print(*ast));
    GradientRun plain = reverse_gradient(ast, at, "x", false);
    GradientRun ck = reverse_gradient(ast, at, "x", true);
    CHECK(ck.peak_live <= plain.peak_live);
    CHECK(ck.gradient == plain.gradient);
  }
}

TEST_CASE("a checkpointed chain keeps only the remainder live") {
  // checkpoint(n multiplies) followed by m more, probing the live count when
  // the remainder has finished its forward run.
  const int chain = 12, rest = 4;
  for (bool checkpointed : {false, true}) {
    Session s;
    std::size_t live_at_probe = 0;
    Program f = [&s, &live_at_probe, checkpointed](Value x) {
      Thunk body([x] {
        Comp acc = Comp::pure(x);
        for (int i = 0; i < chain; ++i) {
          acc = bind(acc, [x](Value v) { return t(v, x); });
        }
        return acc;
      });
      Comp head = checkpointed ? checkpoint(body) : body.force();
      return bind(head, [&s, &live_at_probe, x](Value v) {
        Comp acc = Comp::pure(v);
        for (int i = 0; i < rest; ++i) {
          acc = bind(acc, [x](Value u) { return t(u, x); });
        }
        return bind(acc, [&s, &live_at_probe](Value out) {
          return later([&s, &live_at_probe, out] {
            live_at_probe = s.store.live_count();
            return Comp::pure(out);
          });
        });
      });
    };
    double g = ev(checkpointed ? gradc(s, f, 1.0) : grad(s, f, 1.0)).real();
    CHECK(g == chain + rest + 1.0);
    CAPTURE(checkpointed);
    if (checkpointed) {
      // z, the checkpoint result, and one cell per remaining multiply.
      CHECK(live_at_probe == 1 + 1 + rest);
    } else {
      CHECK(live_at_probe == 1 + chain + rest);
    }
  }
}
