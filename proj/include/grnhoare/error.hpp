#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grnhoare {

enum class ErrorCode {
  SyntaxError,
  UnknownName,
  UnknownVariable,
  UnknownSymbol,
  DuplicateName,
  MultiplexCycle,
  ThresholdOutOfRange,
  ParamOutOfBounds,
  ParamIndexNotSubsetOfPredecessors,
  NotAPredecessorSubset,
  AssignOutOfRange,
  IncompleteValuation,
  SizeLimitExceeded,
  ResultTooLarge,
  WhileNotSupportedForCrossCheck,
  Io,
};

inline std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::MultiplexCycle: return "MultiplexCycle";
    case ErrorCode::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::ParamOutOfBounds: return "ParamOutOfBounds";
    case ErrorCode::ParamIndexNotSubsetOfPredecessors: return "ParamIndexNotSubsetOfPredecessors";
    case ErrorCode::NotAPredecessorSubset: return "NotAPredecessorSubset";
    case ErrorCode::AssignOutOfRange: return "AssignOutOfRange";
    case ErrorCode::IncompleteValuation: return "IncompleteValuation";
    case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::ResultTooLarge: return "ResultTooLarge";
    case ErrorCode::WhileNotSupportedForCrossCheck: return "WhileNotSupportedForCrossCheck";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace grnhoare
