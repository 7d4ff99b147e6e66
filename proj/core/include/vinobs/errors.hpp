#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vinobs {

enum class ErrorCode {
  NotAntisymmetric,
  NotUnit,
  NotRotation,
  LandmarkAtCamera,
  MissingStereoPair,
  UnknownLandmark,
  NonFiniteState,
  SingularInnovation,
  ScheduleViolation,
  UnsupportedSpectrum,
  InsufficientHistory,
  CameraOnLandmark,
  TooFewLandmarks,
  ParseError,
  ValidationError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Numeric failures (exit code 2 from the CLI) as opposed to bad input (exit code 1).
bool is_numeric_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vinobs
