#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace invdet {

enum class ErrorKind {
  RankDeficient,
  NotPositiveDefinite,
  SingularBlock,
  DimensionMismatch,
  DuplicateFrequency,
  ZeroDirection,
  InvariantMismatch,
  DomainError,
  QuadratureNotConverged,
  NotBracketable,
  InsufficientTrials,
  SelfCheckFailed,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace invdet
