#include "effad/effects.hpp"

#include <algorithm>
#include <utility>

#include <fmt/format.h>

namespace effad {

// ---- commands -------------------------------------------------------------

std::string interface_name(Interface i) {
  return i == Interface::Smooth ? "Smooth" : "Checkpoint";
}

std::string unary_name(Unary u) {
  switch (u) {
    case Unary::NegateE:
      return "negateE";
  }
  return "?";
}

std::string binary_name(Binary b) {
  switch (b) {
    case Binary::PlusE:
      return "plusE";
    case Binary::TimesE:
      return "timesE";
  }
  return "?";
}

Thunk::Thunk(std::function<Comp()> body)
    : body_(std::make_shared<const std::function<Comp()>>(std::move(body))) {}

Comp Thunk::force() const {
  if (!body_) throw EngineError("forcing an empty thunk");
  return (*body_)();
}

const SmoothPayload& Command::smooth() const {
  if (const auto* s = std::get_if<SmoothPayload>(&payload)) return *s;
  throw EngineError("command is not a Smooth command");
}

const CheckpointPayload& Command::checkpoint() const {
  if (const auto* s = std::get_if<CheckpointPayload>(&payload)) return *s;
  throw EngineError("command is not a Checkpoint command");
}

namespace {

std::string arg(const Value& v) {
  if (v.is_real() && v.real() >= 0) return v.render();
  return "(" + v.render() + ")";
}

}  // namespace

std::string Command::render() const {
  std::string body;
  if (iface == Interface::Checkpoint) {
    body = "checkpoint {..}";
  } else {
    body = std::visit(
        [](const auto& ap) -> std::string {
          using T = std::decay_t<decltype(ap)>;
          if constexpr (std::is_same_v<T, Ap0>) {
            return "ap0 (constE " + format_real(ap.fn.value) + ")";
          } else if constexpr (std::is_same_v<T, Ap1>) {
            return "ap1 " + unary_name(ap.fn) + " " + arg(ap.arg);
          } else {
            return "ap2 " + binary_name(ap.fn) + " " + arg(ap.lhs) + " " +
                   arg(ap.rhs);
          }
        },
        smooth());
  }
  if (depth != 0) body += fmt::format(" @{}", depth);
  return body;
}

Command smooth_command(SmoothPayload p, int depth) {
  return Command{Interface::Smooth, std::move(p), depth};
}

Command checkpoint_command(Thunk body, int depth) {
  return Command{Interface::Checkpoint, CheckpointPayload{std::move(body)},
                 depth};
}

// ---- computations ---------------------------------------------------------

Resumption::Resumption(std::function<Comp(Value)> fn)
    : state_(std::make_shared<State>(State{std::move(fn), false})) {}

Comp Resumption::operator()(Value v) const {
  if (!state_) throw EngineError("resuming an empty continuation");
  if (state_->fired) throw ContinuationReused("one-shot resumption");
  state_->fired = true;
  // Drop the captured frames as soon as they are consumed.
  auto fn = std::move(state_->fn);
  state_->fn = nullptr;
  return fn(std::move(v));
}

bool Resumption::fired() const { return state_ && state_->fired; }

Comp Comp::pure(Value v) {
  return Comp(std::make_shared<const Node>(std::in_place_index<0>, std::move(v)));
}

Comp Comp::suspend(Command cmd, Resumption resume) {
  return Comp(std::make_shared<const Node>(
      std::in_place_index<1>, Pending{std::move(cmd), std::move(resume)}));
}

Comp Comp::step(std::function<Comp()> next) {
  return Comp(
      std::make_shared<const Node>(std::in_place_index<2>, Step{std::move(next)}));
}

Adaptor Adaptor::hide_innermost(Interface iface) {
  return Adaptor(iface, Kind::HideInnermost);
}

Adaptor Adaptor::hide_second(Interface iface) {
  return Adaptor(iface, Kind::HideSecond);
}

int Adaptor::remap(int depth) const {
  switch (kind_) {
    case Kind::HideInnermost:
      return depth + 1;
    case Kind::HideSecond:
      return depth == 0 ? 0 : depth + 1;
  }
  return depth;
}

bool Handler::handles(Interface i) const {
  return std::find(interfaces.begin(), interfaces.end(), i) !=
         interfaces.end();
}

Comp perform(Command cmd) {
  return Comp::suspend(std::move(cmd),
                       Resumption([](Value v) { return Comp::pure(v); }));
}

Comp bind(Comp c, Cont f) {
  if (c.is_pure()) return f(c.value());
  if (c.is_step()) {
    return Comp::step([next = c.bounce().next, f = std::move(f)] {
      return bind(next(), f);
    });
  }
  const auto& op = c.pending();
  auto k = op.resume;
  return Comp::suspend(op.cmd, Resumption([k, f = std::move(f)](Value v) {
                         return bind(k(std::move(v)), f);
                       }));
}

Comp later(std::function<Comp()> f) { return Comp::step(std::move(f)); }

Comp adapt(const Adaptor& a, Comp c) {
  if (c.is_pure()) return c;
  if (c.is_step()) {
    return Comp::step([a, next = c.bounce().next] { return adapt(a, next()); });
  }
  const auto& op = c.pending();
  Command cmd = op.cmd;
  if (cmd.iface == a.target()) cmd.depth = a.remap(cmd.depth);
  auto k = op.resume;
  return Comp::suspend(std::move(cmd), Resumption([a, k](Value v) {
                         return adapt(a, k(std::move(v)));
                       }));
}

Comp handle(HandlerRef h, Comp c) {
  if (c.is_pure()) {
    return h->on_return ? h->on_return(c.value()) : c;
  }
  if (c.is_step()) {
    return Comp::step([h, next = c.bounce().next] { return handle(h, next()); });
  }
  const auto& op = c.pending();
  auto k = op.resume;
  if (!h->handles(op.cmd.iface)) {
    return Comp::suspend(op.cmd, Resumption([h, k](Value v) {
                           return handle(h, k(std::move(v)));
                         }));
  }
  if (op.cmd.depth > 0) {
    Command fwd = op.cmd;
    fwd.depth -= 1;
    return Comp::suspend(std::move(fwd), Resumption([h, k](Value v) {
                           return handle(h, k(std::move(v)));
                         }));
  }

  Tracer* tr = h->tracer;
  std::uint64_t capture = 0;
  if (tr) {
    capture = tr->next_capture();
    tr->emit(TraceKind::Handled, h->name + ": " + op.cmd.render());
    tr->emit(TraceKind::ContinuationCaptured, fmt::format("k{}", capture));
  }
  Resumption rewrapped([h, k, tr, capture](Value v) {
    if (tr) {
      tr->emit(TraceKind::Resumed,
               fmt::format("k{} <- {}", capture, v.render()));
    }
    return Comp::step([h, k, v = std::move(v)] { return handle(h, k(v)); });
  });
  return h->on_command(op.cmd, std::move(rewrapped));
}

Comp settle(Comp c) {
  while (c.is_step()) {
    auto next = c.bounce().next;
    c = next();
  }
  return c;
}

Value run_pure(const Comp& comp) {
  Comp c = settle(comp);
  if (c.is_pure()) return c.value();
  const auto& cmd = c.pending().cmd;
  throw UnhandledCommand(interface_name(cmd.iface), cmd.depth, cmd.render());
}

// ---- tracing --------------------------------------------------------------

std::string_view trace_kind_name(TraceKind kind) {
  switch (kind) {
    case TraceKind::Handled:
      return "Handled";
    case TraceKind::ContinuationCaptured:
      return "ContinuationCaptured";
    case TraceKind::Resumed:
      return "Resumed";
    case TraceKind::CellNew:
      return "CellNew";
    case TraceKind::CellRead:
      return "CellRead";
    case TraceKind::CellWrite:
      return "CellWrite";
    case TraceKind::CheckpointEnter:
      return "CheckpointEnter";
    case TraceKind::CheckpointReplay:
      return "CheckpointReplay";
    case TraceKind::RegionReleased:
      return "RegionReleased";
  }
  return "?";
}

void Tracer::emit(TraceKind kind, std::string detail) {
  events_.push_back(TraceEvent{kind, std::move(detail), events_.size() + 1});
}

std::string render_line(const TraceEvent& e) {
  return fmt::format("step {:03}  {}  {}", e.step, trace_kind_name(e.kind),
                     e.detail);
}

}  // namespace effad
