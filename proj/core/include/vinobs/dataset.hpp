#pragma once

#include <filesystem>
#include <vector>

#include "vinobs/types.hpp"

namespace vinobs {

struct GroundTruthSample {
  double t = 0.0;
  Rotation R;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

/// All streams of one recording. Streams are sorted by strictly increasing t.
struct Dataset {
  std::vector<ImuSample> imu;
  LandmarkMap landmarks;
  std::vector<BearingFrame> bearings;
  std::vector<PositionFrame> positions;
  std::vector<GroundTruthSample> groundtruth;
  std::vector<CameraExtrinsics> extrinsics;

  bool has_groundtruth() const { return !groundtruth.empty(); }
  /// nullptr when absent.
  const CameraExtrinsics* camera(int cam_id) const;
  /// Throws Error(ValidationError) naming the violated invariant.
  void validate() const;
};

/// Reads imu.csv, landmarks.csv (required) and bearings.csv, positions.csv,
/// groundtruth.csv, extrinsics.csv (optional) from dir.
/// Throws Error(ParseError) with file:line, Error(ValidationError), Error(IoError).
Dataset load_dataset(const std::filesystem::path& dir);

/// Writes every non-empty stream; imu.csv and landmarks.csv are always written.
void save_dataset(const std::filesystem::path& dir, const Dataset& ds);

}  // namespace vinobs
