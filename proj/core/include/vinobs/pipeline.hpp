#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vinobs/config.hpp"
#include "vinobs/dataset.hpp"
#include "vinobs/degeneracy.hpp"
#include "vinobs/hybrid.hpp"
#include "vinobs/observability.hpp"
#include "vinobs/trace.hpp"

namespace vinobs {

/// R_hat(0) = exp(angle axis^x), p_hat(0), v_hat(0) from init, e_hat = e_i, P = p0 I.
ObserverState initial_state(const RunConfig& cfg, double t0 = 0.0);

/// Sensor setup and gains for cfg over the dataset's map and rig.
/// Throws Error(ValidationError) when the mode lacks extrinsics.
ObserverModel make_model(const RunConfig& cfg, const Dataset& ds);

/// Vision sets of the dataset merged by timestamp.
std::vector<MeasurementSet> vision_sets(const Dataset& ds);

struct EstimateResult {
  std::vector<TraceRecord> trace;
  ObserverState final_state;
  std::vector<JumpRecord> jumps;
};

/// Runs the configured observer over the dataset; one trace record per IMU timestamp.
EstimateResult estimate(const RunConfig& cfg, const Dataset& ds);

/// simulate_dataset with the config's simulation settings.
Dataset simulate(const RunConfig& cfg);

struct MonoMotionReport {
  bool available = false;
  std::string reason;
  std::array<int, 3> ids{0, 0, 0};
  MonoMotionResult result;
};

struct DegeneracyReport {
  bool available = false;
  std::string reason;
  Vec3 p_prime = Vec3::Zero();
  DegeneracyVerdict verdict;
};

struct AnalysisReport {
  std::vector<GramianReport> windows;
  StereoCondition stereo;
  MonoMotionReport mono;
  DegeneracyReport degeneracy;
};

/// Per-window Gramians of the configured mode, the stereo and monocular
/// sufficient conditions, and the static degeneracy verdict.
AnalysisReport analyze(const RunConfig& cfg, const Dataset& ds);

/// JSON text with keys windows, stereo_condition, mono_motion, static_degeneracy.
std::string report_to_json(const AnalysisReport& report);

}  // namespace vinobs
