#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gkdv {

enum class ErrorKind {
  argument,
  precondition,
  no_critical_point,
  not_a_minimizer,
  empty_loop,
  open_level_set,
  numerical_degeneracy,
  aliasing,
  eigensolver,
  radius,
  degenerate_parameterization,
  transport,
  extraction,
  instability,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers and tests
/// distinguish failure classes without a deep hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gkdv
