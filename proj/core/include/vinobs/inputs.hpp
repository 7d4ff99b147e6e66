#pragma once

#include <optional>
#include <vector>

#include "vinobs/dataset.hpp"
#include "vinobs/integrator.hpp"
#include "vinobs/simworld.hpp"

namespace vinobs {

/// Exact IMU and noiseless measurements synthesized from the eight trajectory
/// at any query time. The trajectory must outlive this object.
class TrajectoryInputs final : public InputSource {
 public:
  TrajectoryInputs(const EightTrajectory& traj, std::vector<Landmark> landmarks,
                   std::vector<CameraExtrinsics> rig, VisibilityModel vis = {},
                   std::optional<CameraLoss> loss = std::nullopt);

  ImuSample imu(double t) const override;
  std::optional<MeasurementSet> measurement(double t) const override;

  /// Positions stop after this time (triangulation disabled).
  void set_position_cutoff(double t) { position_cutoff_ = t; }

 private:
  const EightTrajectory& traj_;
  std::vector<Landmark> landmarks_;
  std::vector<CameraExtrinsics> rig_;
  VisibilityModel vis_;
  std::optional<CameraLoss> loss_;
  std::optional<double> position_cutoff_;
};

/// Recorded streams. IMU is linearly interpolated; bearings and positions are
/// linearly interpolated between the bracketing frames for landmarks present
/// in both (bearings renormalized). No measurement outside the vision span.
class DatasetInputs final : public InputSource {
 public:
  explicit DatasetInputs(const Dataset& ds);

  ImuSample imu(double t) const override { return imu_.imu(t); }
  std::optional<MeasurementSet> measurement(double t) const override;

 private:
  ImuStream imu_;
  std::vector<BearingFrame> bearings_;
  std::vector<PositionFrame> positions_;
};

}  // namespace vinobs
