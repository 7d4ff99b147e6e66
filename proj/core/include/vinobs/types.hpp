#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vinobs/geom.hpp"

namespace vinobs {

using Vec15 = Eigen::Matrix<double, 15, 1>;
using Mat15 = Eigen::Matrix<double, 15, 15>;

struct RigidBodyState {
  double t = 0.0;
  Rotation R;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 omega = Vec3::Zero();
  Vec3 a = Vec3::Zero();
};

struct Landmark {
  int id = 0;
  Vec3 position = Vec3::Zero();
};

/// Landmarks keyed by id. Ids are unique; insertion order is not preserved.
class LandmarkMap {
 public:
  LandmarkMap() = default;
  /// Throws Error(ValidationError) on duplicate ids.
  explicit LandmarkMap(const std::vector<Landmark>& landmarks);

  void insert(const Landmark& lm);
  bool contains(int id) const { return by_id_.count(id) != 0; }
  /// Throws Error(UnknownLandmark).
  const Vec3& position(int id) const;
  std::size_t size() const { return by_id_.size(); }
  bool empty() const { return by_id_.empty(); }
  std::vector<Landmark> to_vector() const;

  auto begin() const { return by_id_.begin(); }
  auto end() const { return by_id_.end(); }

 private:
  std::map<int, Vec3> by_id_;
};

/// Body-to-camera transform: a point x_B in the body frame has camera
/// coordinates R_c^T (x_B - p_c).
struct CameraExtrinsics {
  int cam_id = 0;
  Rotation R_c;
  Vec3 p_c = Vec3::Zero();
};

struct BearingObservation {
  int cam_id = 0;
  int landmark_id = 0;
  UnitVector3 y = UnitVector3::from(Vec3::UnitZ());
};

struct BearingFrame {
  double t = 0.0;
  std::vector<BearingObservation> observations;

  /// Throws Error(ValidationError) if a (cam_id, landmark_id) pair repeats.
  void validate() const;
  const BearingObservation* find(int cam_id, int landmark_id) const;
};

struct PositionObservation {
  int landmark_id = 0;
  Vec3 y = Vec3::Zero();  // body-frame landmark position R^T (p_i - p)
};

struct PositionFrame {
  double t = 0.0;
  std::vector<PositionObservation> observations;
};

struct ImuSample {
  double t = 0.0;
  Vec3 omega = Vec3::Zero();
  Vec3 a = Vec3::Zero();
};

enum class MeasurementMode { Position3d, Stereo, Monocular };

const char* to_string(MeasurementMode mode);
/// Throws Error(ConfigError) on unknown names.
MeasurementMode parse_measurement_mode(const std::string& s);

inline const Vec3 kDefaultGravity{0.0, 0.0, -9.81};

}  // namespace vinobs
