#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vie {

enum class ErrorKind {
  InvalidInterval,
  DimensionError,
  IndexError,
  DomainError,
  SingularSystem,
  NoConvergence,
  UnknownProblem,
  InvalidProblem,
  NotApplicable,
  NotConverged,
  Divergence,
  InvalidConfig,
  SpecError,
  IoError,
  InternalFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes failure classes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vie
