#include "effad/value.hpp"

#include <cmath>

#include <fmt/format.h>

#include "effad/errors.hpp"

namespace effad {

Value::Value(Dual d) : rep_(std::make_shared<const Dual>(std::move(d))) {}
Value::Value(Prop p) : rep_(std::make_shared<const Prop>(std::move(p))) {}

double Value::real() const {
  if (const auto* r = std::get_if<double>(&rep_)) return *r;
  throw LayerMismatch("expected a real, got " + layer_name(*this));
}

const Dual& Value::dual() const {
  if (const auto* d = std::get_if<std::shared_ptr<const Dual>>(&rep_))
    return **d;
  throw LayerMismatch("expected a dual, got " + layer_name(*this));
}

const Prop& Value::prop() const {
  if (const auto* p = std::get_if<std::shared_ptr<const Prop>>(&rep_))
    return **p;
  throw LayerMismatch("expected a prop, got " + layer_name(*this));
}

int Value::level() const {
  if (is_unit()) return -1;
  if (is_real()) return 0;
  if (is_dual()) return 1 + dual().primal.level();
  return 1 + prop().primal.level();
}

std::string Value::render() const {
  if (is_unit()) return "unit";
  if (is_real()) return format_real(real());
  if (is_dual()) {
    const auto& d = dual();
    auto wrap = [](const Value& v) {
      return v.is_real() ? v.render() : "(" + v.render() + ")";
    };
    return "dual " + wrap(d.primal) + " " + wrap(d.tangent);
  }
  const auto& p = prop();
  auto fwd = p.primal.is_real() ? p.primal.render()
                                : "(" + p.primal.render() + ")";
  return fmt::format("prop {} <{}>", fwd, p.adjoint.index);
}

Value make_dual(Value primal, Value tangent) {
  if (!same_layer(primal, tangent)) {
    throw LayerMismatch("dual components on different layers: " +
                        layer_name(primal) + " and " + layer_name(tangent));
  }
  return Dual{std::move(primal), std::move(tangent)};
}

bool same_layer(const Value& a, const Value& b) {
  if (a.is_real() || b.is_real()) return a.is_real() && b.is_real();
  if (a.is_unit() || b.is_unit()) return a.is_unit() && b.is_unit();
  if (a.is_dual() && b.is_dual())
    return same_layer(a.dual().primal, b.dual().primal);
  if (a.is_prop() && b.is_prop())
    return same_layer(a.prop().primal, b.prop().primal);
  return false;
}

std::string layer_name(const Value& v) {
  if (v.is_unit()) return "unit";
  if (v.is_real()) return "real";
  if (v.is_dual()) return "dual(" + layer_name(v.dual().primal) + ")";
  return "prop(" + layer_name(v.prop().primal) + ")";
}

std::string format_real(double r) {
  if (r == 0) return "0";
  if (std::isnan(r)) return "nan";
  if (std::isinf(r)) return r > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", r);
}

}  // namespace effad
