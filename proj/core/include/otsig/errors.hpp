#pragma once

#include <stdexcept>
#include <string>

namespace otsig {

enum class ErrorCode {
  AllZero,
  NegativeMass,
  OutOfRange,
  EmptySupport,
  OutOfDomain,
  NotInvertible,
  DomainMismatch,
  SamplingExhausted,
  BadReference,
  DegenerateMap,
  MassLoss,
  TooLarge,
  Infeasible,
  ZeroMassPoint,
  DimensionMismatch,
  ConfigError,
  SupportEscape,
  OracleInfeasible,
  NotGradientMap,
  FormatError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::BadReference: return "BadReference";
    case ErrorCode::DegenerateMap: return "DegenerateMap";
    case ErrorCode::MassLoss: return "MassLoss";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::ZeroMassPoint: return "ZeroMassPoint";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::SupportEscape: return "SupportEscape";
    case ErrorCode::OracleInfeasible: return "OracleInfeasible";
    case ErrorCode::NotGradientMap: return "NotGradientMap";
    case ErrorCode::FormatError: return "FormatError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace otsig
