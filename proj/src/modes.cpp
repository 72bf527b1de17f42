#include "effad/modes.hpp"

#include "effad/errors.hpp"
#include "effad/handlers.hpp"

namespace effad {

namespace {

double lookup(const Bindings& at, const std::string& name) {
  for (const auto& [k, v] : at) {
    if (k == name) return v;
  }
  throw UserError("--wrt variable '" + name + "' has no binding in --at");
}

// Binds every variable except `wrt` through a constant command, left to
// right, then lowers the body.
Comp with_constants(const expr::AstPtr& a, const Bindings& at, std::size_t i,
                    const std::string& wrt, expr::ValueEnv env,
                    expr::LowerOptions opts) {
  while (i < at.size() && at[i].first == wrt) ++i;
  if (i == at.size()) return expr::lower(a, env, opts);
  return bind(c(at[i].second), [a, at, i, wrt, env, opts](Value v) mutable {
    env.insert_or_assign(at[i].first, std::move(v));
    return with_constants(a, at, i + 1, wrt, std::move(env), opts);
  });
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "evaluate") return Mode::Evaluate;
  if (name == "forward") return Mode::Forward;
  if (name == "reverse") return Mode::Reverse;
  if (name == "checkpoint") return Mode::Checkpoint;
  throw UserError("unknown mode '" + name + "'");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Evaluate:
      return "evaluate";
    case Mode::Forward:
      return "forward";
    case Mode::Reverse:
      return "reverse";
    case Mode::Checkpoint:
      return "checkpoint";
  }
  return "?";
}

expr::RealEnv real_env(const Bindings& at) {
  expr::RealEnv env;
  for (const auto& [k, v] : at) env.insert_or_assign(k, v);
  return env;
}

double eval_expr(const expr::AstPtr& a, const Bindings& at, Tracer* tracer) {
  expr::ValueEnv env;
  for (const auto& [k, v] : at) env.insert_or_assign(k, Value(v));
  return run_pure(evaluate(expr::lower(a, env), tracer)).real();
}

Value forward_dual(const expr::AstPtr& a, const Bindings& at,
                   const std::string& wrt, Tracer* tracer) {
  lookup(at, wrt);
  expr::ValueEnv env;
  for (const auto& [k, v] : at) {
    env.insert_or_assign(k, make_dual(v, k == wrt ? 1.0 : 0.0));
  }
  Value r = run_pure(evaluate(diff(expr::lower(a, env), tracer), tracer));
  if (!r.is_dual()) throw LayerMismatch("forward mode did not yield a dual");
  return r;
}

GradientRun reverse_gradient(const expr::AstPtr& a, const Bindings& at,
                             const std::string& wrt, bool checkpointed,
                             Tracer* tracer) {
  double x = lookup(at, wrt);
  expr::LowerOptions opts{checkpointed};
  for (const auto& name : expr::free_variables(*a)) {
    bool bound = false;
    for (const auto& kv : at) bound = bound || kv.first == name;
    if (!bound) throw UnboundVariable(name);
  }
  Session s(tracer);
  s.store.enable_write_log();
  Program f = [a, at, wrt, opts](Value z) {
    expr::ValueEnv env;
    env.insert_or_assign(wrt, std::move(z));
    return with_constants(a, at, 0, wrt, std::move(env), opts);
  };
  Comp run = checkpointed ? gradc(s, f, x) : grad(s, f, x);
  GradientRun out;
  out.gradient = run_pure(evaluate(std::move(run), tracer)).real();
  out.peak_live = s.store.peak_live();
  out.allocations = s.store.total_allocations();
  out.writes = s.store.write_log();
  return out;
}

double gradient(Mode mode, const expr::AstPtr& a, const Bindings& at,
                const std::string& wrt, Tracer* tracer) {
  switch (mode) {
    case Mode::Forward:
      return forward_dual(a, at, wrt, tracer).dual().tangent.real();
    case Mode::Reverse:
      return reverse_gradient(a, at, wrt, false, tracer).gradient;
    case Mode::Checkpoint:
      return reverse_gradient(a, at, wrt, true, tracer).gradient;
    case Mode::Evaluate:
      break;
  }
  throw UserError("grad needs --mode forward, reverse or checkpoint");
}

}  // namespace effad
