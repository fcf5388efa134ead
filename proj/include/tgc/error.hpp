#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tgc {

enum class ErrorCode {
  EmptyGenerators,
  NonNegativeCoordinate,
  DimensionMismatch,
  ParameterOutOfRange,
  NegativeDualCoordinate,
  PositiveCoordinate,
  LPNumericalFailure,
  BudgetExceeded,
  MethodUnavailable,
  ScaleTooSmall,
  MalformedJson,
  SchemaViolation,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyGenerators: return "EmptyGenerators";
    case ErrorCode::NonNegativeCoordinate: return "NonNegativeCoordinate";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::NegativeDualCoordinate: return "NegativeDualCoordinate";
    case ErrorCode::PositiveCoordinate: return "PositiveCoordinate";
    case ErrorCode::LPNumericalFailure: return "LPNumericalFailure";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::MethodUnavailable: return "MethodUnavailable";
    case ErrorCode::ScaleTooSmall: return "ScaleTooSmall";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code. what() is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tgc
