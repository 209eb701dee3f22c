#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace soliton {

/// Error classes raised by the library. Each maps to a distinct CLI exit code.
enum class ErrorKind {
  SingularMatrix,
  OrderOverflow,
  PoleCollision,
  DomainError,
  NearPole,
  ZeroEigenvector,
  RealityViolation,
  FitResidualTooLarge,
  OmegaZero,
  NonConvergent,
  StepOverflow,
  InvalidFunctional,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Exit code reported by the command-line tool for an error class.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace soliton
