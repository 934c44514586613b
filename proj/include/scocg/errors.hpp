#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scocg {

enum class ErrorCode {
  DimensionMismatch,
  IndexOutOfRange,
  SymmetryViolation,
  InvalidArgument,
  PiVanished,
  NoUnsolved,
  MalformedHeader,
  UnsupportedQualifier,
  MalformedEntry,
  DuplicateEntry,
  Singular,
  JacobiNoConvergence,
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::SymmetryViolation: return "SYMMETRY_VIOLATION";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::PiVanished: return "PI_VANISHED";
    case ErrorCode::NoUnsolved: return "NO_UNSOLVED";
    case ErrorCode::MalformedHeader: return "MALFORMED_HEADER";
    case ErrorCode::UnsupportedQualifier: return "UNSUPPORTED_QUALIFIER";
    case ErrorCode::MalformedEntry: return "MALFORMED_ENTRY";
    case ErrorCode::DuplicateEntry: return "DUPLICATE_ENTRY";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::JacobiNoConvergence: return "JACOBI_NO_CONVERGENCE";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

/// Exception carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace scocg
