#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "vinobs/observer_state.hpp"
#include "vinobs/types.hpp"

namespace vinobs {

/// The part of an estimate the innovation terms depend on. R_hat is a plain
/// matrix so that intermediate integration stages can be evaluated too.
struct EstimateView {
  Mat3 R_hat = Mat3::Identity();
  Vec3 p_hat = Vec3::Zero();
  std::array<Vec3, 3> e_hat{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};

  static EstimateView of(const ObserverState& est) {
    return {est.R_hat.matrix(), est.p_hat, est.e_hat};
  }
};

enum class BlockKind { Position, Stereo, Mono };

/// Stacked translational innovation sigma_y (3N) and output matrix C (3N x 15),
/// one 3-row block per included landmark in increasing landmark id order.
struct Innovation {
  Eigen::VectorXd sigma_y;
  Eigen::MatrixXd C;
  std::vector<int> landmark_ids;
  std::vector<BlockKind> kinds;
  std::vector<Mat3> projectors;  // Pi_i (identity for position blocks)
  std::vector<double> ranges;    // ||p_hat_i - p_hat||

  std::size_t blocks() const { return landmark_ids.size(); }
  bool empty() const { return landmark_ids.empty(); }
  void append(int id, BlockKind kind, const Mat3& pi, const Vec3& sigma, const Vec3& p_i,
              double range);
};

/// A(t) of the translational error dynamics. 5x5 grid of 3x3 blocks:
/// diagonal -omega^x, (1,5) = I, (5,2..4) = g_1 I, g_2 I, g_3 I.
Mat15 build_A(const Vec3& omega, const Vec3& g);

/// Row block [Pi, -p_1 Pi, -p_2 Pi, -p_3 Pi, 0] of C for a landmark at p_i.
Eigen::Matrix<double, 3, 15> c_block(const Mat3& pi, const Vec3& p_i);

/// sigma_R = (k_R / 2) sum_i rho_i e_hat_i x e_i.
Vec3 sigma_R(const std::array<Vec3, 3>& e_hat, const GainConfig& cfg);
inline Vec3 sigma_R(const ObserverState& est, const GainConfig& cfg) {
  return sigma_R(est.e_hat, cfg);
}

/// Stereo blocks for every landmark the frame reports from cam1 or cam2.
/// Throws Error(MissingStereoPair) if one side is missing, Error(UnknownLandmark).
Innovation innovation_stereo(const EstimateView& est, const BearingFrame& frame,
                             const CameraExtrinsics& cam1, const CameraExtrinsics& cam2,
                             const LandmarkMap& lms);

/// Monocular blocks for every landmark the frame reports from cam.
Innovation innovation_mono(const EstimateView& est, const BearingFrame& frame,
                           const CameraExtrinsics& cam, const LandmarkMap& lms);

/// sigma_yi = R_hat^T (p_hat_i - p_hat) - y_i with C = C_bar. Throws Error(UnknownLandmark).
Innovation innovation_position(const EstimateView& est, const PositionFrame& frame,
                               const LandmarkMap& lms);

/// Stereo blocks where both cameras see a landmark, monocular blocks where
/// only one of them does.
Innovation innovation_bearings(const EstimateView& est, const BearingFrame& frame,
                               const CameraExtrinsics& cam1, const CameraExtrinsics& cam2,
                               const LandmarkMap& lms);

inline Innovation innovation_stereo(const ObserverState& est, const BearingFrame& frame,
                                    const CameraExtrinsics& cam1, const CameraExtrinsics& cam2,
                                    const LandmarkMap& lms) {
  return innovation_stereo(EstimateView::of(est), frame, cam1, cam2, lms);
}
inline Innovation innovation_mono(const ObserverState& est, const BearingFrame& frame,
                                  const CameraExtrinsics& cam, const LandmarkMap& lms) {
  return innovation_mono(EstimateView::of(est), frame, cam, lms);
}
inline Innovation innovation_position(const ObserverState& est, const PositionFrame& frame,
                                      const LandmarkMap& lms) {
  return innovation_position(EstimateView::of(est), frame, lms);
}

/// Whatever vision data is available at one instant.
struct MeasurementSet {
  double t = 0.0;
  std::optional<BearingFrame> bearings;
  std::optional<PositionFrame> positions;
};

/// Measurement mode plus the extrinsics and map it needs.
struct SensorSetup {
  MeasurementMode mode = MeasurementMode::Stereo;
  std::vector<CameraExtrinsics> rig;
  std::array<int, 2> stereo_pair{1, 2};
  int mono_cam = 1;
  LandmarkMap landmarks;

  /// Throws Error(ValidationError) if the cameras the mode needs are missing.
  void validate() const;
  const CameraExtrinsics& camera(int cam_id) const;
};

/// Dispatches on setup.mode. Returns an empty innovation when the set carries
/// no data for the mode.
Innovation compute_innovation(const EstimateView& est, const MeasurementSet& meas,
                              const SensorSetup& setup);

}  // namespace vinobs
