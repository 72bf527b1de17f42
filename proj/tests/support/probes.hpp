#pragma once

#include <memory>
#include <string>

#include "effad/effects.hpp"
#include "effad/smooth.hpp"

namespace effad::testing {

// Answers every Smooth command with its own tag.
inline HandlerRef probe(double tag, int* hits = nullptr) {
  auto h = std::make_shared<Handler>();
  h->name = "probe" + std::to_string(static_cast<int>(tag));
  h->interfaces = {Interface::Smooth};
  h->on_command = [tag, hits](const Command&, Resumption k) {
    if (hits) ++*hits;
    return k(tag);
  };
  return h;
}

// Plain arithmetic, counting clause entries.
inline HandlerRef counting_evaluate(int* hits) {
  auto h = std::make_shared<Handler>();
  h->name = "count";
  h->interfaces = {Interface::Smooth};
  h->on_command = [hits](const Command& cmd, Resumption k) {
    ++*hits;
    const auto& s = cmd.smooth();
    if (auto* a0 = std::get_if<Ap0>(&s)) return k(a0->fn.value);
    if (auto* a1 = std::get_if<Ap1>(&s)) {
      return k(apply_real(a1->fn, a1->arg.real()));
    }
    const auto& a2 = std::get<Ap2>(s);
    return k(apply_real(a2.fn, a2.lhs.real(), a2.rhs.real()));
  };
  return h;
}

inline Comp at_depth(Comp c, int depth) {
  for (int i = 0; i < depth; ++i) c = adapt(Adaptor::hide_innermost(), c);
  return c;
}

}  // namespace effad::testing
