#include "effad/handlers.hpp"

#include <fmt/format.h>

namespace effad {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

const Dual& as_dual(const Value& v, const char* where) {
  if (!v.is_dual()) {
    throw LayerMismatch(fmt::format("{} expected a dual argument, got {}",
                                    where, layer_name(v)));
  }
  return v.dual();
}

// Adjoint cells hold reals, so the layer below a prop must be the real one.
const Prop& as_prop(const Value& v, const char* where) {
  if (!v.is_prop()) {
    throw LayerMismatch(fmt::format("{} expected a prop argument, got {}",
                                    where, layer_name(v)));
  }
  if (!v.prop().primal.is_real()) {
    throw LayerMismatch(fmt::format(
        "{}: reverse mode only runs directly over reals, got {}", where,
        layer_name(v)));
  }
  return v.prop();
}

double as_real(const Value& v, const char* where) {
  if (!v.is_real()) {
    throw LayerMismatch(
        fmt::format("{} expected a real, got {}", where, layer_name(v)));
  }
  return v.real();
}

Value make_prop(const Value& primal, CellId cell, const char* where) {
  as_real(primal, where);
  return Prop{primal, cell};
}

// ---- evaluate --------------------------------------------------------------

Comp evaluate_clause(const Command& cmd, const Resumption& k) {
  double r = std::visit(
      overloaded{
          [](const Ap0& ap) { return ap.fn.value; },
          [](const Ap1& ap) {
            return apply_real(ap.fn, as_real(ap.arg, "evaluate"));
          },
          [](const Ap2& ap) {
            return apply_real(ap.fn, as_real(ap.lhs, "evaluate"),
                              as_real(ap.rhs, "evaluate"));
          },
      },
      cmd.smooth());
  return k(r);
}

// ---- diff ------------------------------------------------------------------

Comp diff_clause(const Command& cmd, const Resumption& k) {
  return std::visit(
      overloaded{
          [&](const Ap0& ap) {
            return bind(op0(ap.fn), [k](Value a) {
              return bind(c(0), [k, a](Value b) { return k(make_dual(a, b)); });
            });
          },
          [&](const Ap1& ap) {
            const Dual& x = as_dual(ap.arg, "diff");
            Value xv = x.primal, dx = x.tangent;
            Unary u = ap.fn;
            return bind(op1(u, xv), [=](Value a) {
              return bind(der1(u, xv), [=](Value der) {
                return bind(t(der, dx),
                            [=](Value b) { return k(make_dual(a, b)); });
              });
            });
          },
          [&](const Ap2& ap) {
            if (!same_layer(ap.lhs, ap.rhs)) {
              throw LayerMismatch(fmt::format(
                  "diff received {} and {} for {}; lift the outer value",
                  layer_name(ap.lhs), layer_name(ap.rhs), binary_name(ap.fn)));
            }
            const Dual& x = as_dual(ap.lhs, "diff");
            const Dual& y = as_dual(ap.rhs, "diff");
            Value xv = x.primal, dx = x.tangent;
            Value yv = y.primal, dy = y.tangent;
            Binary f = ap.fn;
            return bind(op2(f, xv, yv), [=](Value a) {
              return bind(der2L(f, xv, yv), [=](Value dl) {
                return bind(t(dl, dx), [=](Value left) {
                  return bind(der2R(f, xv, yv), [=](Value dr) {
                    return bind(t(dr, dy), [=](Value right) {
                      return bind(p(left, right), [=](Value b) {
                        return k(make_dual(a, b));
                      });
                    });
                  });
                });
              });
            });
          },
      },
      cmd.smooth());
}

// ---- reverse ---------------------------------------------------------------

// target += der * adjoint(result), as
//   write target (p (read target) (t der (read result)))
// with every read performed when this point of the program is reached.
Comp accumulate(Session& s, CellId target, Comp der, CellId result) {
  return later([&s, target, der, result] {
    double old = s.store.read(target);
    return bind(der, [&s, target, result, old](Value dv) {
      return later([&s, target, result, old, dv] {
        double adj = s.store.read(result);
        return bind(t(dv, adj), [&s, target, old](Value prod) {
          return bind(p(old, prod), [&s, target](Value sum) {
            s.store.write(target, as_real(sum, "reverse accumulation"),
                          WriteKind::Accumulate);
            return Comp::pure();
          });
        });
      });
    });
  });
}

// Shared by `reverse` and by the Smooth delegation of `reversec`. `k` must
// already resume under the handler that called this clause.
Comp reverse_clause(Session& s, const Command& cmd, const Resumption& k) {
  return std::visit(
      overloaded{
          [&](const Ap0& ap) {
            return bind(op0(ap.fn), [&s, k](Value a) {
              return bind(c(0), [&s, k, a](Value zero) {
                CellId r = s.store.new_cell(as_real(zero, "reverse"));
                return k(make_prop(a, r, "reverse"));
              });
            });
          },
          [&](const Ap1& ap) {
            const Prop& x = as_prop(ap.arg, "reverse");
            Value xv = x.primal;
            CellId dx = x.adjoint;
            Unary u = ap.fn;
            return bind(op1(u, xv), [&s, k, xv, dx, u](Value a) {
              return bind(c(0), [&s, k, xv, dx, u, a](Value zero) {
                CellId r = s.store.new_cell(as_real(zero, "reverse"));
                return bind(k(make_prop(a, r, "reverse")),
                            [&s, xv, dx, u, r](const Value&) {
                              return accumulate(s, dx, der1(u, xv), r);
                            });
              });
            });
          },
          [&](const Ap2& ap) {
            const Prop& x = as_prop(ap.lhs, "reverse");
            const Prop& y = as_prop(ap.rhs, "reverse");
            Value xv = x.primal, yv = y.primal;
            CellId dx = x.adjoint, dy = y.adjoint;
            Binary f = ap.fn;
            return bind(op2(f, xv, yv), [=, &s](Value a) {
              return bind(c(0), [=, &s](Value zero) {
                CellId r = s.store.new_cell(as_real(zero, "reverse"));
                return bind(k(make_prop(a, r, "reverse")),
                            [=, &s](const Value&) {
                              return bind(
                                  accumulate(s, dx, der2L(f, xv, yv), r),
                                  [=, &s](const Value&) {
                                    return accumulate(s, dy, der2R(f, xv, yv),
                                                      r);
                                  });
                            });
              });
            });
          },
      },
      cmd.smooth());
}

HandlerRef reverse_handler(Session& s) {
  auto h = std::make_shared<Handler>();
  h->name = "reverse";
  h->interfaces = {Interface::Smooth};
  h->tracer = s.tracer;
  h->on_command = [&s](const Command& cmd, Resumption k) {
    return reverse_clause(s, cmd, k);
  };
  return h;
}

// ---- evaluatet -------------------------------------------------------------

HandlerRef evaluatet_handler(Session& s, CellId scratch) {
  auto h = std::make_shared<Handler>();
  h->name = "evaluatet";
  h->interfaces = {Interface::Smooth, Interface::Checkpoint};
  h->tracer = s.tracer;
  h->on_command = [&s, scratch](const Command& cmd, Resumption k) -> Comp {
    auto share = [scratch, k](Value a) {
      return k(make_prop(a, scratch, "evaluatet"));
    };
    if (cmd.iface == Interface::Checkpoint) {
      // Nested checkpoints only need their primal: run the body inline.
      Thunk body = cmd.checkpoint().body;
      return bind(
          evaluatet(s, scratch, adapt(Adaptor::hide_second(), body.force())),
          [share](Value res) {
            return share(as_prop(res, "evaluatet checkpoint").primal);
          });
    }
    return std::visit(
        overloaded{
            [&](const Ap0& ap) { return bind(op0(ap.fn), share); },
            [&](const Ap1& ap) {
              return bind(op1(ap.fn, as_prop(ap.arg, "evaluatet").primal),
                          share);
            },
            [&](const Ap2& ap) {
              return bind(op2(ap.fn, as_prop(ap.lhs, "evaluatet").primal,
                              as_prop(ap.rhs, "evaluatet").primal),
                          share);
            },
        },
        cmd.smooth());
  };
  return h;
}

// ---- reversec --------------------------------------------------------------

// Checkpointed body `body` answered with `k`:
//   1. primal of the body under evaluatet with a scratch cell
//   2. fresh adjoint cell r for the result; run the remainder k r, which
//      finishes its own backward pass before returning
//   3. read r's adjoint, drop r and everything the remainder allocated
//   4. replay the body under reversec, seeding its result with that adjoint,
//      and drop the replay's cells afterwards
Comp checkpoint_clause(Session& s, const Thunk& body, const Resumption& k) {
  const std::uint64_t id = s.next_checkpoint();
  return later([&s, body, k, id] {
    if (s.tracer) s.tracer->emit(TraceKind::CheckpointEnter,
                                 fmt::format("#{}", id));
    Mark scratch_region = s.store.mark_region();
    return bind(c(0), [&s, body, k, id, scratch_region](Value zero) {
      CellId scratch = s.store.new_cell(as_real(zero, "reversec"));
      Comp primal =
          evaluatet(s, scratch, adapt(Adaptor::hide_second(), body.force()));
      return bind(primal, [&s, body, k, id, scratch_region](Value res) {
        Value fwd = as_prop(res, "checkpoint body").primal;
        s.store.release_region(scratch_region);
        return bind(c(0), [&s, body, k, id, fwd](Value zero) {
          Mark rest_region = s.store.mark_region();
          CellId r = s.store.new_cell(as_real(zero, "reversec"));
          return bind(
              k(make_prop(fwd, r, "reversec")),
              [&s, body, id, r, rest_region](const Value&) {
                return later([&s, body, id, r, rest_region] {
                  double adj = s.store.read(r);
                  s.store.release_region(rest_region);
                  if (s.tracer) s.tracer->emit(TraceKind::CheckpointReplay,
                                               fmt::format("#{} seed {}", id,
                                                           format_real(adj)));
                  Mark replay_region = s.store.mark_region();
                  Comp replay = bind(
                      adapt(Adaptor::hide_second(), body.force()),
                      [&s, adj](Value out) {
                        CellId oc = as_prop(out, "checkpoint replay").adjoint;
                        return later([&s, oc, adj] {
                          double old = s.store.read(oc);
                          return bind(adapt(Adaptor::hide_innermost(),
                                            p(old, adj)),
                                      [&s, oc](Value sum) {
                            s.store.write(oc, as_real(sum, "replay seed"),
                                          WriteKind::ReplaySeed);
                            return Comp::pure();
                          });
                        });
                      });
                  return bind(reversec(s, std::move(replay)),
                              [&s, replay_region](const Value&) {
                                return later([&s, replay_region] {
                                  s.store.release_region(replay_region);
                                  return Comp::pure();
                                });
                              });
                });
              });
        });
      });
    });
  });
}

HandlerRef reversec_handler(Session& s) {
  auto h = std::make_shared<Handler>();
  h->name = "reversec";
  h->interfaces = {Interface::Smooth, Interface::Checkpoint};
  h->tracer = s.tracer;
  h->on_command = [&s](const Command& cmd, Resumption k) -> Comp {
    if (cmd.iface == Interface::Checkpoint) {
      return checkpoint_clause(s, cmd.checkpoint().body, k);
    }
    // Every Smooth command is delegated to reverse's clause, one command at a
    // time, so that a later checkpoint is still caught inside the backward
    // pass of the commands before it.
    return reverse_clause(s, cmd, k);
  };
  return h;
}

// `write (deriv (f z)) seed` followed by reading z's adjoint, with the
// backward program run by `run`.
template <class Run>
Comp gradient(Session& s, const Program& f, Value x, Run run) {
  as_real(x, "grad");
  return bind(c(0), [&s, f, x, run](Value zero) {
    CellId zc = s.store.new_cell(as_real(zero, "grad"));
    Value z = make_prop(x, zc, "grad");
    Comp body = bind(f(z), [&s](Value out) {
      CellId oc = as_prop(out, "grad result").adjoint;
      return bind(adapt(Adaptor::hide_innermost(), c(1)),
                  [&s, oc](Value one) {
                    s.store.write(oc, as_real(one, "grad seed"),
                                  WriteKind::Seed);
                    return Comp::pure();
                  });
    });
    return bind(run(s, std::move(body)), [&s, zc](const Value&) {
      return later([&s, zc] { return Comp::pure(s.store.read(zc)); });
    });
  });
}

}  // namespace

HandlerRef evaluate_handler(Tracer* tracer) {
  auto h = std::make_shared<Handler>();
  h->name = "evaluate";
  h->interfaces = {Interface::Smooth};
  h->tracer = tracer;
  h->on_command = [](const Command& cmd, Resumption k) {
    return evaluate_clause(cmd, k);
  };
  return h;
}

Comp evaluate(Comp c, Tracer* tracer) {
  return handle(evaluate_handler(tracer), std::move(c));
}

HandlerRef diff_handler(Tracer* tracer) {
  auto h = std::make_shared<Handler>();
  h->name = "diff";
  h->interfaces = {Interface::Smooth};
  h->tracer = tracer;
  h->on_command = [](const Command& cmd, Resumption k) {
    return diff_clause(cmd, k);
  };
  return h;
}

Comp diff(Comp c, Tracer* tracer) {
  return handle(diff_handler(tracer), std::move(c));
}

Comp lift(Value x) {
  return bind(adapt(Adaptor::hide_innermost(), c(0)),
              [x](Value zero) { return Comp::pure(make_dual(x, zero)); });
}

Comp d(Program f, Value x, Tracer* tracer) {
  Comp seeded = bind(adapt(Adaptor::hide_innermost(), c(1)),
                     [f, x](Value one) { return f(make_dual(x, one)); });
  return bind(diff(std::move(seeded), tracer), [](Value r) {
    return Comp::pure(as_dual(r, "d result").tangent);
  });
}

Comp reverse(Session& s, Comp c) {
  return handle(reverse_handler(s), std::move(c));
}

Comp grad(Session& s, Program f, Value x) {
  return gradient(s, f, std::move(x),
                  [](Session& ss, Comp body) { return reverse(ss, body); });
}

Comp evaluatet(Session& s, CellId scratch, Comp c) {
  return handle(evaluatet_handler(s, scratch), std::move(c));
}

Comp reversec(Session& s, Comp c) {
  return handle(reversec_handler(s), std::move(c));
}

Comp gradc(Session& s, Program f, Value x) {
  return gradient(s, f, std::move(x),
                  [](Session& ss, Comp body) { return reversec(ss, body); });
}

Comp checkpoint(Thunk body) {
  return perform(checkpoint_command(std::move(body)));
}

}  // namespace effad
