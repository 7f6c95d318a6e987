#pragma once

#include <stdexcept>
#include <string>

namespace dmifilm {

enum class ErrorKind {
  invalid_parameter,
  parse,
  topology,
  empty_mesh,
  point_outside_mesh,
  assembly,
  size_mismatch,
  solver_failure,
  ellipticity_violation,
  degenerate_magnetization,
  io,
};

/// Library-wide exception carrying a machine-checkable kind next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::parse: return "parse-error";
    case ErrorKind::topology: return "topology-error";
    case ErrorKind::empty_mesh: return "empty-mesh";
    case ErrorKind::point_outside_mesh: return "point-outside-mesh";
    case ErrorKind::assembly: return "assembly-error";
    case ErrorKind::size_mismatch: return "size-mismatch";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::ellipticity_violation: return "ellipticity-violation";
    case ErrorKind::degenerate_magnetization: return "degenerate-magnetization";
    case ErrorKind::io: return "io-error";
  }
  return "unknown-error";
}

}  // namespace dmifilm
