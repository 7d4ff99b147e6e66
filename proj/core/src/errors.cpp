#include "vinobs/errors.hpp"

namespace vinobs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::NotRotation: return "NotRotation";
    case ErrorCode::LandmarkAtCamera: return "LandmarkAtCamera";
    case ErrorCode::MissingStereoPair: return "MissingStereoPair";
    case ErrorCode::UnknownLandmark: return "UnknownLandmark";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::SingularInnovation: return "SingularInnovation";
    case ErrorCode::ScheduleViolation: return "ScheduleViolation";
    case ErrorCode::UnsupportedSpectrum: return "UnsupportedSpectrum";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::CameraOnLandmark: return "CameraOnLandmark";
    case ErrorCode::TooFewLandmarks: return "TooFewLandmarks";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numeric_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteState:
    case ErrorCode::SingularInnovation:
    case ErrorCode::UnsupportedSpectrum:
    case ErrorCode::NotRotation:
    case ErrorCode::NotAntisymmetric:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace vinobs
