#include "effad/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "effad/errors.hpp"
#include "effad/expr.hpp"
#include "effad/modes.hpp"
#include "effad/smooth.hpp"
#include "effad/trace.hpp"

namespace effad::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string expr;
  std::vector<std::string> at;
  std::string wrt;
  std::string mode;
  bool json = false;
};

ordered_json number(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::fabs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

Bindings parse_bindings(const std::vector<std::string>& specs) {
  Bindings out;
  for (const auto& spec : specs) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw UserError("binding '" + item + "' is not of the form name=value");
      }
      std::string name = item.substr(0, eq);
      std::string text = item.substr(eq + 1);
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size()) {
        throw UserError("binding '" + item + "' has a malformed value");
      }
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const auto& kv) { return kv.first == name; });
      if (it != out.end()) {
        it->second = v;
      } else {
        out.emplace_back(name, v);
      }
    }
  }
  return out;
}

expr::AstPtr read_expr(const std::string& text, std::istream& in) {
  if (text == "-") {
    std::string all((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    return expr::parse(all);
  }
  return expr::parse(text);
}

std::string resolve_wrt(const Options& o, const Bindings& at) {
  if (!o.wrt.empty()) return o.wrt;
  if (at.empty()) throw UserError("--wrt is required (no variables bound)");
  return at.front().first;
}

int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
  auto ast = read_expr(o.expr, in);
  double v = eval_expr(ast, parse_bindings(o.at));
  if (o.json) {
    out << ordered_json{{"value", number(v)}}.dump() << "\n";
  } else {
    out << format_real(v) << "\n";
  }
  return kOk;
}

int cmd_grad(const Options& o, std::istream& in, std::ostream& out) {
  auto ast = read_expr(o.expr, in);
  auto at = parse_bindings(o.at);
  std::string wrt = resolve_wrt(o, at);
  Mode mode = parse_mode(o.mode);
  double g = gradient(mode, ast, at, wrt);
  if (o.json) {
    out << ordered_json{{"mode", mode_name(mode)},
                        {"wrt", wrt},
                        {"gradient", number(g)}}
               .dump()
        << "\n";
  } else {
    out << format_real(g) << "\n";
  }
  return kOk;
}

int cmd_trace(const Options& o, std::istream& in, std::ostream& out) {
  auto ast = read_expr(o.expr, in);
  auto at = parse_bindings(o.at);
  Mode mode = parse_mode(o.mode);
  Tracer tracer;
  std::string result;
  switch (mode) {
    case Mode::Evaluate:
      result = format_real(eval_expr(ast, at, &tracer));
      break;
    case Mode::Forward:
      result = forward_dual(ast, at, resolve_wrt(o, at), &tracer).render();
      break;
    case Mode::Reverse:
    case Mode::Checkpoint:
      result = format_real(reverse_gradient(ast, at, resolve_wrt(o, at),
                                            mode == Mode::Checkpoint, &tracer)
                               .gradient);
      break;
  }
  if (o.json) {
    auto arr = ordered_json::array();
    for (const auto& e : tracer.events()) {
      arr.push_back({{"step", e.step},
                     {"kind", std::string(trace_kind_name(e.kind))},
                     {"detail", e.detail}});
    }
    out << arr.dump(2) << "\n";
  } else {
    for (const auto& e : tracer.events()) out << render_line(e) << "\n";
    out << "done  " << result << "\n";
  }
  return kOk;
}

int cmd_stats(const Options& o, std::istream& in, std::ostream& out) {
  auto ast = read_expr(o.expr, in);
  auto at = parse_bindings(o.at);
  std::string wrt = resolve_wrt(o, at);
  GradientRun plain = reverse_gradient(ast, at, wrt, false);
  GradientRun ckpt = reverse_gradient(ast, at, wrt, true);
  if (o.json) {
    auto row = [](const GradientRun& r) {
      return ordered_json{{"peak_live", r.peak_live},
                          {"allocations", r.allocations},
                          {"gradient", number(r.gradient)}};
    };
    out << ordered_json{{"wrt", wrt},
                        {"checkpoints", expr::count_checkpoints(*ast)},
                        {"reverse", row(plain)},
                        {"checkpoint", row(ckpt)}}
               .dump(2)
        << "\n";
  } else {
    out << fmt::format("{:<12}{:>10}{:>13}  {}\n", "mode", "peak_live",
                       "allocations", "gradient");
    out << fmt::format("{:<12}{:>10}{:>13}  {}\n", "reverse", plain.peak_live,
                       plain.allocations, format_real(plain.gradient));
    out << fmt::format("{:<12}{:>10}{:>13}  {}\n", "checkpoint",
                       ckpt.peak_live, ckpt.allocations,
                       format_real(ckpt.gradient));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Automatic differentiation with effect handlers", "effad"};
  app.require_subcommand(1);

  Options o;
  std::string grad_mode = "reverse";
  std::string trace_mode = "evaluate";
  auto common = [&o](CLI::App* sub) {
    sub->add_option("expr", o.expr, "expression text, or - for stdin")
        ->required();
    sub->add_option("--at", o.at, "bindings such as x=2,y=4 (repeatable)");
    sub->add_flag("--json", o.json, "machine-readable output");
  };

  auto* eval = app.add_subcommand("eval", "evaluate an expression");
  common(eval);
  auto* grad = app.add_subcommand("grad", "derivative at a point");
  common(grad);
  grad->add_option("--wrt", o.wrt, "variable to differentiate by");
  grad->add_option("--mode", grad_mode, "forward, reverse or checkpoint")
      ->capture_default_str();
  auto* trace = app.add_subcommand("trace", "print the handling trace");
  common(trace);
  trace->add_option("--wrt", o.wrt, "variable to differentiate by");
  trace->add_option("--mode", trace_mode,
                    "evaluate, forward, reverse or checkpoint")
      ->capture_default_str();
  auto* stats = app.add_subcommand("stats",
                                   "adjoint-cell usage, plain vs checkpointed");
  common(stats);
  stats->add_option("--wrt", o.wrt, "variable to differentiate by");

  // After `--` everything is an expression, even text starting with '-'.
  // A leading space keeps the option parser from reading it as a flag; the
  // expression lexer skips it.
  std::vector<std::string> plain;
  bool rest_positional = false;
  for (const auto& a : args) {
    if (!rest_positional && a == "--") {
      rest_positional = true;
      continue;
    }
    plain.push_back(rest_positional && !a.empty() && a[0] == '-' && a != "-"
                        ? " " + a
                        : a);
  }
  std::vector<std::string> reversed(plain.rbegin(), plain.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUserError;
  }

  o.mode = grad->parsed() ? grad_mode : trace_mode;

  try {
    check_derivative_tables();
    if (eval->parsed()) return cmd_eval(o, in, out);
    if (grad->parsed()) return cmd_grad(o, in, out);
    if (trace->parsed()) return cmd_trace(o, in, out);
    return cmd_stats(o, in, out);
  } catch (const std::exception& e) {
    return report(e, err);
  }
}

int report(const std::exception& e, std::ostream& err) {
  if (dynamic_cast<const UserError*>(&e)) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  }
  err << "internal error: " << e.what() << "\n";
  return kInternalError;
}

}  // namespace effad::cli
