#pragma once

#include <stdexcept>
#include <string>

namespace ccopt {

enum class ErrorCode {
  DimensionMismatch,
  NotANumber,
  OutsideDomain,
  InvalidArgument,
  InfeasibleGrid,
  DimensionTooLarge,
  DescentRequired,
  ContractViolation,
  EmptyDataset,
  ParseError,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::NotANumber: return "not a number";
    case ErrorCode::OutsideDomain: return "outside domain";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::InfeasibleGrid: return "infeasible grid";
    case ErrorCode::DimensionTooLarge: return "dimension too large";
    case ErrorCode::DescentRequired: return "descent direction required";
    case ErrorCode::ContractViolation: return "contract violation";
    case ErrorCode::EmptyDataset: return "empty dataset";
    case ErrorCode::ParseError: return "parse error";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

/// Exception carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace detail
}  // namespace ccopt
