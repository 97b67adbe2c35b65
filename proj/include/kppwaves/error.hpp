#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kppwaves {

enum class ErrorCode {
  InvalidParameter,
  DegenerateScale,
  Unsupported,
  DomainError,
  SeedFailure,
  StepFailure,
  NoIntersection,
  Inconclusive,
  NotAConnection,
  InsufficientTail,
  StabilityViolation,
  NegativityError,
  DomainTooSmall,
  NoFront,
  MissingArtifact,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::SeedFailure: return "SeedFailure";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::NotAConnection: return "NotAConnection";
    case ErrorCode::InsufficientTail: return "InsufficientTail";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::NegativityError: return "NegativityError";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::NoFront: return "NoFront";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace kppwaves
