#pragma once

#include <stdexcept>
#include <string>

namespace effad {

/// Base of every failure raised by the engine itself. The CLI maps these to
/// exit status 3; user errors (ParseError, UnboundVariable) map to 2.
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContinuationReused : public EngineError {
 public:
  explicit ContinuationReused(const std::string& what)
      : EngineError("continuation resumed twice: " + what) {}
};

class UnhandledCommand : public EngineError {
 public:
  UnhandledCommand(std::string interface, int depth, const std::string& cmd)
      : EngineError("unhandled " + interface + " command at depth " +
                    std::to_string(depth) + ": " + cmd),
        interface_(std::move(interface)),
        depth_(depth) {}

  const std::string& interface() const { return interface_; }
  int depth() const { return depth_; }

 private:
  std::string interface_;
  int depth_;
};

/// A value of the wrong interpretation layer reached a handler clause, e.g. a
/// plain dual crossing into a nested derivative without `lift`.
class LayerMismatch : public EngineError {
 public:
  explicit LayerMismatch(const std::string& what)
      : EngineError("layer mismatch: " + what) {}
};

class DanglingCell : public EngineError {
 public:
  explicit DanglingCell(const std::string& what)
      : EngineError("dangling cell: " + what) {}
};

class NonNestedRelease : public EngineError {
 public:
  explicit NonNestedRelease(const std::string& what)
      : EngineError("non-nested region release: " + what) {}
};

/// Errors caused by the user's input rather than by the engine.
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public UserError {
 public:
  ParseError(const std::string& msg, int line, int column)
      : UserError(std::to_string(line) + ":" + std::to_string(column) +
                  ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnboundVariable : public UserError {
 public:
  explicit UnboundVariable(const std::string& name)
      : UserError("unbound variable '" + name + "'"), name_(name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace effad
