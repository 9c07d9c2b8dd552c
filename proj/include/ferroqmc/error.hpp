#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ferroqmc {

enum class ErrorCode {
  InvalidInput,
  NotFerromagnetic,
  OutOfRange,
  DimensionTooLarge,
  EigensolveFailure,
  NotPositiveDefinite,
  EmptyCircuit,
  UnknownVertex,
  TooLarge,
  OddVertexCount,
  MajorityAborted,
  BudgetExceeded,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotFerromagnetic: return "NotFerromagnetic";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::EigensolveFailure: return "EigensolveFailure";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::EmptyCircuit: return "EmptyCircuit";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OddVertexCount: return "OddVertexCount";
    case ErrorCode::MajorityAborted: return "MajorityAborted";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

/// Structured failure carried by every throwing operation in the library.
/// `first`/`second` name the offending qubit pair, site or vertex pair
/// (1-based qubits, 0-based vertices); -1 when not applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int first = -1, int second = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        first_(first),
        second_(second) {}

  ErrorCode code() const noexcept { return code_; }
  int first() const noexcept { return first_; }
  int second() const noexcept { return second_; }

 private:
  ErrorCode code_;
  int first_;
  int second_;
};

}  // namespace ferroqmc
