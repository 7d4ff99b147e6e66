#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "vinobs/dataset.hpp"
#include "vinobs/types.hpp"

namespace vinobs {

/// Ground truth along p(t) = 2 (sin t, sin t cos t, 1) with body rate
/// omega(t) = (-cos 2t, 1, sin 2t) and R(0) = I.
///
/// R(t) is integrated once at construction (RK4 on the matrix ODE, polar
/// re-projection per step) and stored at the nodes k * dt. Queries between
/// nodes integrate the remaining fraction from the preceding node, so state()
/// is defined for every t in [0, t_end]. Read-only after construction.
class EightTrajectory {
 public:
  explicit EightTrajectory(double t_end, double dt = 1.0 / 200.0,
                           const Vec3& gravity = kDefaultGravity);

  /// Throws Error(ValidationError) for t outside [0, t_end].
  RigidBodyState state(double t) const;
  Rotation attitude(double t) const;

  static Vec3 omega(double t);
  static Vec3 position(double t);
  static Vec3 velocity(double t);
  static Vec3 inertial_acceleration(double t);

  double t_end() const { return t_end_; }
  double dt() const { return dt_; }
  const Vec3& gravity() const { return g_; }

 private:
  double t_end_;
  double dt_;
  Vec3 g_;
  std::vector<Mat3> nodes_;
};

/// One RK4 step of R' = R omega(t)^x followed by polar projection.
Mat3 integrate_attitude_rk4(const Mat3& r, double t, double h, Vec3 (*omega)(double));

/// Two cameras with identity rotation, 20 cm baseline along body y:
/// cam 1 at (0, -0.1, 0), cam 2 at (0, 0.1, 0).
std::vector<CameraExtrinsics> default_stereo_rig();

inline constexpr double kDefaultMinRange = 1e-6;

/// y = R_c^T (p_B - p_c) / ||p_B - p_c|| with p_B = R^T (p_i - p).
/// Throws Error(LandmarkAtCamera) when ||p_B - p_c|| <= d_min.
UnitVector3 synth_bearing(const RigidBodyState& state, const Landmark& lm,
                          const CameraExtrinsics& cam, double d_min = kDefaultMinRange);

/// R^T (p_i - p).
Vec3 synth_position(const RigidBodyState& state, const Landmark& lm);

/// Rotates every bearing by exp(n^x), n ~ N(0, sigma^2 I3), then renormalizes.
BearingFrame apply_noise(const BearingFrame& frame, double sigma, std::uint64_t seed);

struct VisibilityModel {
  double fov_half_angle = 0.0;  // rad about the camera z axis; <= 0 disables the cone
  double max_range = std::numeric_limits<double>::infinity();

  bool visible(const RigidBodyState& state, const Landmark& lm,
               const CameraExtrinsics& cam) const;
};

enum class LandmarkLayout { RandomCube, Coplanar };

/// Uniform in [-half_extent, half_extent]^3 (RandomCube) or on the plane
/// z = -1 within the same square (Coplanar).
std::vector<Landmark> random_landmarks(int count, double half_extent, LandmarkLayout layout,
                                       std::uint64_t seed);

struct CameraLoss {
  int cam_id = 2;
  double t = 0.0;  // camera delivers nothing for t >= this
};

struct SimConfig {
  double duration = 20.0;
  double imu_rate = 200.0;
  double vision_rate = 200.0;
  int num_landmarks = 5;
  double landmark_half_extent = 5.0;
  LandmarkLayout layout = LandmarkLayout::RandomCube;
  std::uint64_t seed = 1;
  Vec3 gravity = kDefaultGravity;
  std::vector<CameraExtrinsics> rig = default_stereo_rig();
  VisibilityModel visibility;
  double bearing_noise = 0.0;   // rad, per axis
  double position_noise = 0.0;  // m, per axis
  double gyro_noise = 0.0;      // rad/s std per axis
  double accel_noise = 0.0;     // m/s^2 std per axis
  std::optional<CameraLoss> camera_loss;
};

struct SynthFrames {
  BearingFrame bearings;
  PositionFrame positions;
};

/// Noiseless bearings from every visible rig camera and body-frame positions of
/// the landmarks that are triangulable (seen by two cameras, or by one for a
/// single-camera rig).
SynthFrames synth_frames(const RigidBodyState& state, const std::vector<Landmark>& landmarks,
                         const std::vector<CameraExtrinsics>& rig, const VisibilityModel& vis,
                         const std::optional<CameraLoss>& loss);

/// Synthesizes imu, bearings (every rig camera), positions (only while at
/// least two cameras see the landmark, or always for a single-camera rig),
/// groundtruth and extrinsics along the eight trajectory.
Dataset simulate_dataset(const SimConfig& cfg);

}  // namespace vinobs
