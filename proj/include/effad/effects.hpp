#pragma once

// Computation trees with one-shot delimited continuations.
//
// A Comp is either a final value or a pending command together with the rest
// of the program waiting for the command's answer. Handlers are folds over
// this tree: a handler that claims a command receives the remainder as a
// Resumption, already re-wrapped so that resuming keeps running under the
// same handler (deep handling).
//
// Instance selection is explicit. Every command carries a depth counted in
// handlers of its own interface, 0 being the innermost. A handler that does
// not claim a command of its interface forwards it outward with depth - 1;
// adaptors remap depths to skip instances.

#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "effad/command.hpp"
#include "effad/errors.hpp"
#include "effad/trace.hpp"
#include "effad/value.hpp"

namespace effad {

/// The remainder of a computation, callable at most once.
class Resumption {
 public:
  Resumption() = default;
  explicit Resumption(std::function<Comp(Value)> fn);

  /// Throws ContinuationReused on a second call.
  Comp operator()(Value v) const;

  bool fired() const;

 private:
  struct State {
    std::function<Comp(Value)> fn;
    bool fired = false;
  };
  std::shared_ptr<State> state_;
};

class Comp {
 public:
  struct Pending {
    Command cmd;
    Resumption resume;
  };

  /// A bounce of the trampoline: no command, just more work to do. Keeps
  /// the native stack flat while handlers resume continuations.
  struct Step {
    std::function<Comp()> next;
  };

  static Comp pure(Value v = Unit{});
  static Comp suspend(Command cmd, Resumption resume);
  static Comp step(std::function<Comp()> next);

  bool is_pure() const { return std::holds_alternative<Value>(*node_); }
  bool is_pending() const { return std::holds_alternative<Pending>(*node_); }
  bool is_step() const { return std::holds_alternative<Step>(*node_); }
  const Value& value() const { return std::get<Value>(*node_); }
  const Pending& pending() const { return std::get<Pending>(*node_); }
  const Step& bounce() const { return std::get<Step>(*node_); }

 private:
  using Node = std::variant<Value, Pending, Step>;
  explicit Comp(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

using Cont = std::function<Comp(Value)>;

/// Depth remapping for one interface.
class Adaptor {
 public:
  /// `<I>`: the innermost instance is skipped, d -> d + 1.
  static Adaptor hide_innermost(Interface iface = Interface::Smooth);
  /// `<I(s a b -> s b)>`: the second instance is skipped, 0 -> 0 and
  /// d -> d + 1 for d >= 1.
  static Adaptor hide_second(Interface iface = Interface::Smooth);

  Interface target() const { return iface_; }
  int remap(int depth) const;

 private:
  enum class Kind { HideInnermost, HideSecond };
  Adaptor(Interface iface, Kind kind) : iface_(iface), kind_(kind) {}

  Interface iface_;
  Kind kind_;
};

struct Handler {
  std::string name;
  std::vector<Interface> interfaces;
  Cont on_return;
  /// Called for commands of a handled interface at depth 0.
  std::function<Comp(const Command&, Resumption)> on_command;
  Tracer* tracer = nullptr;

  bool handles(Interface i) const;
};

using HandlerRef = std::shared_ptr<const Handler>;

/// Emits `cmd`; the resulting computation returns the command's answer.
Comp perform(Command cmd);

/// Runs `c`, then `f` on its result. Commands of `c` come first.
Comp bind(Comp c, Cont f);

/// Defers `f` until the computation is driven to this point. Used to
/// sequence store effects with the commands around them.
Comp later(std::function<Comp()> f);

Comp adapt(const Adaptor& a, Comp c);

Comp handle(HandlerRef h, Comp c);

/// Runs trampoline bounces until the computation is a value or a command.
Comp settle(Comp c);

/// Top level: the computation must have no commands left.
Value run_pure(const Comp& c);

}  // namespace effad
