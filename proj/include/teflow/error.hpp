#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teflow {

enum class ErrorCode {
  EmptySeries,
  EmptyData,
  NoPriorClose,
  NonPositivePrice,
  TooShort,
  DuplicateLabel,
  UnknownLabel,
  LagTooLarge,
  InvalidArgument,
  ZeroWidth,
  OutOfRange,
  LengthMismatch,
  LabelMismatch,
  KindMismatch,
  ZeroVariance,
  ShapeTooSmall,
  ShapeMismatch,
  EmptyGraph,
  NonConvergence,
  DegenerateInput,
  InvalidParams,
  ParseError,
  IoError,
  MissingArtifact,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::NoPriorClose: return "NoPriorClose";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::LagTooLarge: return "LagTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroWidth: return "ZeroWidth";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::ShapeTooSmall: return "ShapeTooSmall";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace teflow
