#include "vinobs/innovation.hpp"

#include <map>
#include <string>

#include "vinobs/errors.hpp"

namespace vinobs {

namespace {

struct LandmarkTerms {
  Vec3 p_i;
  Vec3 d;  // R_hat^T (p_hat_i - p_hat)
};

LandmarkTerms landmark_terms(const EstimateView& est, const Vec3& p_i) {
  const Vec3 p_hat_i = p_i.x() * est.e_hat[0] + p_i.y() * est.e_hat[1] + p_i.z() * est.e_hat[2];
  return {p_i, est.R_hat.transpose() * (p_hat_i - est.p_hat)};
}

// Bearings of one frame grouped by landmark, then camera.
std::map<int, std::map<int, Vec3>> group(const BearingFrame& frame) {
  std::map<int, std::map<int, Vec3>> out;
  for (const auto& ob : frame.observations) out[ob.landmark_id][ob.cam_id] = ob.y.vec();
  return out;
}

void append_stereo(Innovation& inn, const EstimateView& est, int id, const Vec3& p_i,
                   const CameraExtrinsics& c1, const Vec3& y1, const CameraExtrinsics& c2,
                   const Vec3& y2) {
  const LandmarkTerms lt = landmark_terms(est, p_i);
  const Mat3 pi1 = pi_proj(c1.R_c * y1);
  const Mat3 pi2 = pi_proj(c2.R_c * y2);
  const Vec3 s = pi1 * (lt.d - c1.p_c) + pi2 * (lt.d - c2.p_c);
  inn.append(id, BlockKind::Stereo, pi1 + pi2, s, p_i, lt.d.norm());
}

void append_mono(Innovation& inn, const EstimateView& est, int id, const Vec3& p_i,
                 const CameraExtrinsics& c, const Vec3& y) {
  const LandmarkTerms lt = landmark_terms(est, p_i);
  const Mat3 pi = pi_proj(c.R_c * y);
  inn.append(id, BlockKind::Mono, pi, pi * (lt.d - c.p_c), p_i, lt.d.norm());
}

}  // namespace

void Innovation::append(int id, BlockKind kind, const Mat3& pi, const Vec3& sigma,
                        const Vec3& p_i, double range) {
  const auto n = sigma_y.size();
  sigma_y.conservativeResize(n + 3);
  sigma_y.segment<3>(n) = sigma;
  C.conservativeResize(n + 3, 15);
  C.middleRows<3>(n) = c_block(pi, p_i);
  landmark_ids.push_back(id);
  kinds.push_back(kind);
  projectors.push_back(pi);
  ranges.push_back(range);
}

Mat15 build_A(const Vec3& omega, const Vec3& g) {
  Mat15 a = Mat15::Zero();
  const Mat3 w = -skew(omega);
  for (int k = 0; k < 5; ++k) a.block<3, 3>(3 * k, 3 * k) = w;
  a.block<3, 3>(0, 12) = Mat3::Identity();
  for (int k = 0; k < 3; ++k) a.block<3, 3>(12, 3 + 3 * k) = g[k] * Mat3::Identity();
  return a;
}

Eigen::Matrix<double, 3, 15> c_block(const Mat3& pi, const Vec3& p_i) {
  Eigen::Matrix<double, 3, 15> c;
  c.block<3, 3>(0, 0) = pi;
  for (int k = 0; k < 3; ++k) c.block<3, 3>(0, 3 + 3 * k) = -p_i[k] * pi;
  c.block<3, 3>(0, 12).setZero();
  return c;
}

Vec3 sigma_R(const std::array<Vec3, 3>& e_hat, const GainConfig& cfg) {
  Vec3 s = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    s += cfg.rho[i] * e_hat[static_cast<std::size_t>(i)].cross(Vec3::Unit(i));
  }
  return 0.5 * cfg.k_R * s;
}

Innovation innovation_stereo(const EstimateView& est, const BearingFrame& frame,
                             const CameraExtrinsics& cam1, const CameraExtrinsics& cam2,
                             const LandmarkMap& lms) {
  Innovation inn;
  for (const auto& [id, by_cam] : group(frame)) {
    const auto a = by_cam.find(cam1.cam_id);
    const auto b = by_cam.find(cam2.cam_id);
    if (a == by_cam.end() && b == by_cam.end()) continue;
    if (a == by_cam.end() || b == by_cam.end()) {
      throw Error(ErrorCode::MissingStereoPair,
                  "landmark " + std::to_string(id) + " lacks a bearing from camera " +
                      std::to_string(a == by_cam.end() ? cam1.cam_id : cam2.cam_id));
    }
    append_stereo(inn, est, id, lms.position(id), cam1, a->second, cam2, b->second);
  }
  return inn;
}

Innovation innovation_mono(const EstimateView& est, const BearingFrame& frame,
                           const CameraExtrinsics& cam, const LandmarkMap& lms) {
  Innovation inn;
  for (const auto& [id, by_cam] : group(frame)) {
    const auto a = by_cam.find(cam.cam_id);
    if (a == by_cam.end()) continue;
    append_mono(inn, est, id, lms.position(id), cam, a->second);
  }
  return inn;
}

Innovation innovation_position(const EstimateView& est, const PositionFrame& frame,
                               const LandmarkMap& lms) {
  std::map<int, Vec3> by_id;
  for (const auto& ob : frame.observations) by_id[ob.landmark_id] = ob.y;
  Innovation inn;
  for (const auto& [id, y] : by_id) {
    const LandmarkTerms lt = landmark_terms(est, lms.position(id));
    inn.append(id, BlockKind::Position, Mat3::Identity(), lt.d - y, lt.p_i, lt.d.norm());
  }
  return inn;
}

Innovation innovation_bearings(const EstimateView& est, const BearingFrame& frame,
                               const CameraExtrinsics& cam1, const CameraExtrinsics& cam2,
                               const LandmarkMap& lms) {
  Innovation inn;
  for (const auto& [id, by_cam] : group(frame)) {
    const auto a = by_cam.find(cam1.cam_id);
    const auto b = by_cam.find(cam2.cam_id);
    const bool ha = a != by_cam.end();
    const bool hb = b != by_cam.end();
    if (ha && hb) {
      append_stereo(inn, est, id, lms.position(id), cam1, a->second, cam2, b->second);
    } else if (ha) {
      append_mono(inn, est, id, lms.position(id), cam1, a->second);
    } else if (hb) {
      append_mono(inn, est, id, lms.position(id), cam2, b->second);
    }
  }
  return inn;
}

void SensorSetup::validate() const {
  auto has = [this](int id) {
    for (const auto& c : rig) {
      if (c.cam_id == id) return true;
    }
    return false;
  };
  switch (mode) {
    case MeasurementMode::Position3d:
      return;
    case MeasurementMode::Stereo:
      for (int id : stereo_pair) {
        if (!has(id)) {
          throw Error(ErrorCode::ValidationError,
                      "extrinsics: stereo mode needs camera " + std::to_string(id));
        }
      }
      return;
    case MeasurementMode::Monocular:
      if (!has(mono_cam)) {
        throw Error(ErrorCode::ValidationError,
                    "extrinsics: monocular mode needs camera " + std::to_string(mono_cam));
      }
      return;
  }
}

const CameraExtrinsics& SensorSetup::camera(int cam_id) const {
  for (const auto& c : rig) {
    if (c.cam_id == cam_id) return c;
  }
  throw Error(ErrorCode::ValidationError, "extrinsics: no camera " + std::to_string(cam_id));
}

Innovation compute_innovation(const EstimateView& est, const MeasurementSet& meas,
                              const SensorSetup& setup) {
  switch (setup.mode) {
    case MeasurementMode::Position3d:
      if (!meas.positions) return {};
      return innovation_position(est, *meas.positions, setup.landmarks);
    case MeasurementMode::Stereo:
      if (!meas.bearings) return {};
      return innovation_bearings(est, *meas.bearings, setup.camera(setup.stereo_pair[0]),
                                 setup.camera(setup.stereo_pair[1]), setup.landmarks);
    case MeasurementMode::Monocular:
      if (!meas.bearings) return {};
      return innovation_mono(est, *meas.bearings, setup.camera(setup.mono_cam), setup.landmarks);
  }
  return {};
}

}  // namespace vinobs
