#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace measinv {

enum class ErrorKind {
  DimensionMismatch,
  GroupMismatch,
  DependentSupport,
  NotApplicable,
  Singular,
  BudgetExceeded,
  PreconditionViolated,
  DomainError,
  Infeasible,
  Parse,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure the library reports. The kind is
/// machine-checkable; the message names the violated hypothesis.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace measinv
