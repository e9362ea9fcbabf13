#include "invdet/error.hpp"

namespace invdet {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DuplicateFrequency: return "DuplicateFrequency";
    case ErrorKind::ZeroDirection: return "ZeroDirection";
    case ErrorKind::InvariantMismatch: return "InvariantMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::NotBracketable: return "NotBracketable";
    case ErrorKind::InsufficientTrials: return "InsufficientTrials";
    case ErrorKind::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace invdet
