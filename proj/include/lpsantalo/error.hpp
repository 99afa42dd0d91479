#pragma once

#include <stdexcept>
#include <string>

namespace lpsantalo {

enum class ErrorCode {
  DegenerateBody,
  UnsupportedKind,
  UnsupportedDimension,
  NonInvertible,
  BallNonOrthogonal,
  NonIntegrable,
  MaxIterExceeded,
  BracketFailure,
  InvalidArgument,
  ParseError,
  RangeExceeded,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateBody: return "DegenerateBody";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::BallNonOrthogonal: return "BallNonOrthogonal";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeExceeded: return "RangeExceeded";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lpsantalo
