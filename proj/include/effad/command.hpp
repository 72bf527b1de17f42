#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "effad/value.hpp"

namespace effad {

enum class Interface { Smooth, Checkpoint };

std::string interface_name(Interface i);

// The smooth function signature. Extending it means adding a row to the
// derivative tables in smooth.cpp.
struct ConstE {
  double value = 0;
};
using Nullary = ConstE;
enum class Unary { NegateE };
enum class Binary { PlusE, TimesE };

inline constexpr Unary kAllUnary[] = {Unary::NegateE};
inline constexpr Binary kAllBinary[] = {Binary::PlusE, Binary::TimesE};

std::string unary_name(Unary u);
std::string binary_name(Binary b);

struct Ap0 {
  Nullary fn;
};
struct Ap1 {
  Unary fn;
  Value arg;
};
struct Ap2 {
  Binary fn;
  Value lhs;
  Value rhs;
};
using SmoothPayload = std::variant<Ap0, Ap1, Ap2>;

class Comp;

/// A suspended computation. Forcing builds a fresh Comp each time, so the
/// same body may be run under different handlers (checkpoint replay).
class Thunk {
 public:
  Thunk() = default;
  explicit Thunk(std::function<Comp()> body);

  Comp force() const;

 private:
  std::shared_ptr<const std::function<Comp()>> body_;
};

struct CheckpointPayload {
  Thunk body;
};

struct Command {
  Interface iface = Interface::Smooth;
  std::variant<SmoothPayload, CheckpointPayload> payload;
  /// Instance selector: 0 is the innermost enclosing handler of `iface`.
  int depth = 0;

  const SmoothPayload& smooth() const;
  const CheckpointPayload& checkpoint() const;

  std::string render() const;
};

Command smooth_command(SmoothPayload p, int depth = 0);
Command checkpoint_command(Thunk body, int depth = 0);

}  // namespace effad
