#include "effad/expr.hpp"

#include "effad/errors.hpp"
#include "effad/handlers.hpp"
#include "effad/smooth.hpp"

namespace effad::expr {

namespace {

template <class T>
AstPtr make(T node) {
  return std::make_shared<const Ast>(Ast{std::move(node)});
}

void collect_free(const Ast& a, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          if (!bound.count(n.name)) out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Neg>) {
          collect_free(*n.arg, bound, out);
        } else if constexpr (std::is_same_v<T, Add> || std::is_same_v<T, Sub> ||
                             std::is_same_v<T, Mul>) {
          collect_free(*n.lhs, bound, out);
          collect_free(*n.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, Let>) {
          collect_free(*n.bound, bound, out);
          bool fresh = bound.insert(n.name).second;
          collect_free(*n.body, bound, out);
          if (fresh) bound.erase(n.name);
        } else if constexpr (std::is_same_v<T, Checkpoint>) {
          collect_free(*n.body, bound, out);
        }
      },
      a.node);
}

Comp lower_rec(const AstPtr& a, const ValueEnv& env, LowerOptions opts) {
  return std::visit(
      [&](const auto& node) -> Comp {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Num>) {
          return c(node.value);
        } else if constexpr (std::is_same_v<T, Var>) {
          auto it = env.find(node.name);
          if (it == env.end()) throw UnboundVariable(node.name);
          return Comp::pure(it->second);
        } else if constexpr (std::is_same_v<T, Neg>) {
          return bind(lower_rec(node.arg, env, opts),
                      [](Value x) { return n(std::move(x)); });
        } else if constexpr (std::is_same_v<T, Add> || std::is_same_v<T, Mul> ||
                             std::is_same_v<T, Sub>) {
          AstPtr rhs = node.rhs;
          return bind(lower_rec(node.lhs, env, opts),
                      [rhs, env, opts](Value x) {
                        return bind(lower_rec(rhs, env, opts), [x](Value y) {
                          if constexpr (std::is_same_v<T, Add>) {
                            return p(x, y);
                          } else if constexpr (std::is_same_v<T, Mul>) {
                            return t(x, y);
                          } else {
                            return bind(n(y), [x](Value ny) { return p(x, ny); });
                          }
                        });
                      });
        } else if constexpr (std::is_same_v<T, Let>) {
          std::string name = node.name;
          AstPtr body = node.body;
          return bind(lower_rec(node.bound, env, opts),
                      [name, body, env, opts](Value v) {
                        ValueEnv inner = env;
                        inner.insert_or_assign(name, std::move(v));
                        return lower_rec(body, inner, opts);
                      });
        } else {
          if (!opts.emit_checkpoints) return lower_rec(node.body, env, opts);
          AstPtr body = node.body;
          return effad::checkpoint(
              Thunk([body, env, opts] { return lower_rec(body, env, opts); }));
        }
      },
      a->node);
}

AstPtr inline_rec(const AstPtr& a, const std::map<std::string, AstPtr>& env) {
  return std::visit(
      [&](const auto& n) -> AstPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Num>) {
          return a;
        } else if constexpr (std::is_same_v<T, Var>) {
          auto it = env.find(n.name);
          return it == env.end() ? a : it->second;
        } else if constexpr (std::is_same_v<T, Neg>) {
          return neg(inline_rec(n.arg, env));
        } else if constexpr (std::is_same_v<T, Add>) {
          return add(inline_rec(n.lhs, env), inline_rec(n.rhs, env));
        } else if constexpr (std::is_same_v<T, Sub>) {
          return sub(inline_rec(n.lhs, env), inline_rec(n.rhs, env));
        } else if constexpr (std::is_same_v<T, Mul>) {
          return mul(inline_rec(n.lhs, env), inline_rec(n.rhs, env));
        } else if constexpr (std::is_same_v<T, Let>) {
          auto inner = env;
          inner.insert_or_assign(n.name, inline_rec(n.bound, env));
          return inline_rec(n.body, inner);
        } else {
          return checkpoint(inline_rec(n.body, env));
        }
      },
      a->node);
}

// Derivative of a let-free, checkpoint-free tree.
AstPtr derive(const AstPtr& a, const std::string& wrt) {
  return std::visit(
      [&](const auto& n) -> AstPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Num>) {
          return num(0);
        } else if constexpr (std::is_same_v<T, Var>) {
          return num(n.name == wrt ? 1 : 0);
        } else if constexpr (std::is_same_v<T, Neg>) {
          return neg(derive(n.arg, wrt));
        } else if constexpr (std::is_same_v<T, Add>) {
          return add(derive(n.lhs, wrt), derive(n.rhs, wrt));
        } else if constexpr (std::is_same_v<T, Sub>) {
          return sub(derive(n.lhs, wrt), derive(n.rhs, wrt));
        } else if constexpr (std::is_same_v<T, Mul>) {
          return add(mul(derive(n.lhs, wrt), n.rhs),
                     mul(n.lhs, derive(n.rhs, wrt)));
        } else {
          throw EngineError("derive: lets and checkpoints must be removed");
        }
      },
      a->node);
}

}  // namespace

AstPtr num(double v) { return make(Num{v}); }
AstPtr var(std::string name) { return make(Var{std::move(name)}); }
AstPtr neg(AstPtr a) { return make(Neg{std::move(a)}); }
AstPtr add(AstPtr l, AstPtr r) { return make(Add{std::move(l), std::move(r)}); }
AstPtr sub(AstPtr l, AstPtr r) { return make(Sub{std::move(l), std::move(r)}); }
AstPtr mul(AstPtr l, AstPtr r) { return make(Mul{std::move(l), std::move(r)}); }
AstPtr let(std::string name, AstPtr bound, AstPtr body) {
  return make(Let{std::move(name), std::move(bound), std::move(body)});
}
AstPtr checkpoint(AstPtr body) { return make(Checkpoint{std::move(body)}); }

bool equal(const Ast& a, const Ast& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Num>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Neg>) {
          return equal(*x.arg, *y.arg);
        } else if constexpr (std::is_same_v<T, Let>) {
          return x.name == y.name && equal(*x.bound, *y.bound) &&
                 equal(*x.body, *y.body);
        } else if constexpr (std::is_same_v<T, Checkpoint>) {
          return equal(*x.body, *y.body);
        } else {
          return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
        }
      },
      a.node);
}

std::set<std::string> free_variables(const Ast& a) {
  std::set<std::string> bound, out;
  collect_free(a, bound, out);
  return out;
}

int count_checkpoints(const Ast& a) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Num> || std::is_same_v<T, Var>) {
          return 0;
        } else if constexpr (std::is_same_v<T, Neg>) {
          return count_checkpoints(*n.arg);
        } else if constexpr (std::is_same_v<T, Let>) {
          return count_checkpoints(*n.bound) + count_checkpoints(*n.body);
        } else if constexpr (std::is_same_v<T, Checkpoint>) {
          return 1 + count_checkpoints(*n.body);
        } else {
          return count_checkpoints(*n.lhs) + count_checkpoints(*n.rhs);
        }
      },
      a.node);
}

AstPtr erase_checkpoints(const AstPtr& a) {
  return std::visit(
      [&](const auto& n) -> AstPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Num> || std::is_same_v<T, Var>) {
          return a;
        } else if constexpr (std::is_same_v<T, Neg>) {
          return neg(erase_checkpoints(n.arg));
        } else if constexpr (std::is_same_v<T, Add>) {
          return add(erase_checkpoints(n.lhs), erase_checkpoints(n.rhs));
        } else if constexpr (std::is_same_v<T, Sub>) {
          return sub(erase_checkpoints(n.lhs), erase_checkpoints(n.rhs));
        } else if constexpr (std::is_same_v<T, Mul>) {
          return mul(erase_checkpoints(n.lhs), erase_checkpoints(n.rhs));
        } else if constexpr (std::is_same_v<T, Let>) {
          return let(n.name, erase_checkpoints(n.bound),
                     erase_checkpoints(n.body));
        } else {
          return erase_checkpoints(n.body);
        }
      },
      a->node);
}

Comp lower(const AstPtr& a, const ValueEnv& env, LowerOptions opts) {
  for (const auto& name : free_variables(*a)) {
    if (!env.count(name)) throw UnboundVariable(name);
  }
  return lower_rec(a, env, opts);
}

double num_eval(const Ast& a, const RealEnv& env) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Num>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          auto it = env.find(n.name);
          if (it == env.end()) throw UnboundVariable(n.name);
          return it->second;
        } else if constexpr (std::is_same_v<T, Neg>) {
          return -num_eval(*n.arg, env);
        } else if constexpr (std::is_same_v<T, Add>) {
          return num_eval(*n.lhs, env) + num_eval(*n.rhs, env);
        } else if constexpr (std::is_same_v<T, Sub>) {
          return num_eval(*n.lhs, env) - num_eval(*n.rhs, env);
        } else if constexpr (std::is_same_v<T, Mul>) {
          return num_eval(*n.lhs, env) * num_eval(*n.rhs, env);
        } else if constexpr (std::is_same_v<T, Let>) {
          RealEnv inner = env;
          inner.insert_or_assign(n.name, num_eval(*n.bound, env));
          return num_eval(*n.body, inner);
        } else {
          return num_eval(*n.body, env);
        }
      },
      a.node);
}

AstPtr inline_lets(const AstPtr& a) { return inline_rec(a, {}); }

AstPtr symbolic_derivative(const AstPtr& a, const std::string& wrt) {
  return derive(erase_checkpoints(inline_lets(a)), wrt);
}

}  // namespace effad::expr
