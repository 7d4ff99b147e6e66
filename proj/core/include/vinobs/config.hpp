#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>

#include "vinobs/observability.hpp"
#include "vinobs/observer_state.hpp"
#include "vinobs/simworld.hpp"

namespace vinobs {

enum class ObserverKind { Continuous, Hybrid };

struct InitConfig {
  Vec3 axis = Vec3(1.0, 1.0, 1.0).normalized();
  double angle = 0.5 * 3.14159265358979323846;  // R_hat(0) = exp(angle axis^x)
  Vec3 p_hat = Vec3::Zero();
  Vec3 v_hat = Vec3::Zero();
  double p0 = 1.0;  // P(0) = p0 I
};

struct AnalysisConfig {
  double window = 2.0;  // Gramian window delta, s
  double mu = 1e-6;
  double mono_eps = 0.1;
  double mono_window = 2.0;
  GeometryTolerances tol;
  std::optional<Vec3> p_prime;  // static camera position; defaults to the first ground-truth p
};

struct RunConfig {
  MeasurementMode mode = MeasurementMode::Stereo;
  ObserverKind observer = ObserverKind::Continuous;
  double duration = 20.0;
  std::uint64_t seed = 1;
  SimConfig sim;
  GainConfig gains;
  InitConfig init;
  double schedule_t_min = 0.0;
  double schedule_t_max = std::numeric_limits<double>::infinity();
  std::array<int, 2> stereo_pair{1, 2};
  int mono_cam = 1;
  AnalysisConfig analysis;

  /// Copies duration and seed into sim. Call after overrides.
  void finalize();
  /// Throws Error(ConfigError) naming the offending key.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Vector values are
/// whitespace- or comma-separated. Unknown keys are errors.
/// Throws Error(ConfigError) with source:line.
RunConfig parse_config(const std::string& text, const std::string& source = "config");

/// Throws Error(IoError) if the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

const char* to_string(ObserverKind k);

}  // namespace vinobs
