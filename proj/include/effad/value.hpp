#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

namespace effad {

/// Identifier of a mutable adjoint cell. Allocation indices are monotone
/// within one CellStore.
struct CellId {
  std::uint64_t index = 0;
  friend bool operator==(CellId, CellId) = default;
  friend auto operator<=>(CellId, CellId) = default;
};

struct Unit {
  friend bool operator==(Unit, Unit) = default;
};

struct Dual;
struct Prop;

/// A value at some interpretation layer: plain reals at the bottom, duals
/// and props stacked above them.
class Value {
 public:
  Value() : rep_(Unit{}) {}
  Value(Unit u) : rep_(u) {}
  Value(double r) : rep_(r) {}
  Value(Dual d);
  Value(Prop p);

  bool is_unit() const { return std::holds_alternative<Unit>(rep_); }
  bool is_real() const { return std::holds_alternative<double>(rep_); }
  bool is_dual() const {
    return std::holds_alternative<std::shared_ptr<const Dual>>(rep_);
  }
  bool is_prop() const {
    return std::holds_alternative<std::shared_ptr<const Prop>>(rep_);
  }

  // The accessors throw LayerMismatch when the value is of another kind.
  double real() const;
  const Dual& dual() const;
  const Prop& prop() const;

  /// Nesting level: unit -1, reals 0, dual/prop one above their primal.
  int level() const;

  std::string render() const;

 private:
  std::variant<Unit, double, std::shared_ptr<const Dual>,
               std::shared_ptr<const Prop>>
      rep_;
};

struct Dual {
  Value primal;
  Value tangent;
};

struct Prop {
  Value primal;
  CellId adjoint;
};

/// Builds a dual number; both components must live on the same layer.
Value make_dual(Value primal, Value tangent);

/// True when both values have the same constructor along their primal spine,
/// i.e. they belong to the same interpretation layer.
bool same_layer(const Value& a, const Value& b);

std::string layer_name(const Value& v);

// Accessors named after the roles they play for each pair type.
inline const Value& primal_of(const Dual& d) { return d.primal; }
inline const Value& tangent_of(const Dual& d) { return d.tangent; }
inline const Value& forward_of(const Prop& p) { return p.primal; }
inline CellId adjoint_of(const Prop& p) { return p.adjoint; }

/// Renders a real with at most 12 significant digits, integers without a
/// fraction and no negative zero.
std::string format_real(double r);

}  // namespace effad
