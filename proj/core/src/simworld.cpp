#include "vinobs/simworld.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "vinobs/errors.hpp"

namespace vinobs {

namespace {

// splitmix64 finalizer; derives independent stream seeds from one user seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Mat3 integrate_attitude_rk4(const Mat3& r, double t, double h, Vec3 (*omega)(double)) {
  const Mat3 w1 = skew(omega(t));
  const Mat3 w2 = skew(omega(t + 0.5 * h));
  const Mat3 w4 = skew(omega(t + h));
  const Mat3 k1 = r * w1;
  const Mat3 k2 = (r + 0.5 * h * k1) * w2;
  const Mat3 k3 = (r + 0.5 * h * k2) * w2;
  const Mat3 k4 = (r + h * k3) * w4;
  return Rotation::project(r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).matrix();
}

EightTrajectory::EightTrajectory(double t_end, double dt, const Vec3& gravity)
    : t_end_(t_end), dt_(dt), g_(gravity) {
  if (!(t_end >= 0.0) || !(dt > 0.0)) {
    throw Error(ErrorCode::ValidationError, "eight trajectory needs t_end >= 0 and dt > 0");
  }
  const auto n = static_cast<std::size_t>(std::ceil(t_end / dt)) + 1;
  nodes_.reserve(n + 1);
  nodes_.push_back(Mat3::Identity());
  for (std::size_t k = 0; k < n; ++k) {
    nodes_.push_back(integrate_attitude_rk4(nodes_.back(), static_cast<double>(k) * dt, dt,
                                            &EightTrajectory::omega));
  }
}

Vec3 EightTrajectory::omega(double t) {
  return Vec3(-std::cos(2.0 * t), 1.0, std::sin(2.0 * t));
}

Vec3 EightTrajectory::position(double t) {
  return 2.0 * Vec3(std::sin(t), std::sin(t) * std::cos(t), 1.0);
}

Vec3 EightTrajectory::velocity(double t) {
  return 2.0 * Vec3(std::cos(t), std::cos(2.0 * t), 0.0);
}

Vec3 EightTrajectory::inertial_acceleration(double t) {
  return 2.0 * Vec3(-std::sin(t), -2.0 * std::sin(2.0 * t), 0.0);
}

Rotation EightTrajectory::attitude(double t) const {
  if (!(t >= 0.0) || t > t_end_ + 1e-9) {
    std::ostringstream os;
    os << "time " << t << " outside trajectory span [0, " << t_end_ << "]";
    throw Error(ErrorCode::ValidationError, os.str());
  }
  auto k = static_cast<std::size_t>(std::floor(t / dt_));
  if (k >= nodes_.size()) k = nodes_.size() - 1;
  const double t_k = static_cast<double>(k) * dt_;
  const double rem = t - t_k;
  if (rem <= 1e-15) return Rotation::from_matrix(nodes_[k], 1e-8);
  return Rotation::from_matrix(integrate_attitude_rk4(nodes_[k], t_k, rem, &omega), 1e-8);
}

RigidBodyState EightTrajectory::state(double t) const {
  RigidBodyState s;
  s.t = t;
  s.R = attitude(t);
  s.p = position(t);
  s.v = velocity(t);
  s.omega = omega(t);
  s.a = s.R.matrix().transpose() * (inertial_acceleration(t) - g_);
  return s;
}

std::vector<CameraExtrinsics> default_stereo_rig() {
  return {
      CameraExtrinsics{1, Rotation::identity(), Vec3(0.0, -0.1, 0.0)},
      CameraExtrinsics{2, Rotation::identity(), Vec3(0.0, 0.1, 0.0)},
  };
}

UnitVector3 synth_bearing(const RigidBodyState& state, const Landmark& lm,
                          const CameraExtrinsics& cam, double d_min) {
  const Vec3 p_body = state.R.matrix().transpose() * (lm.position - state.p);
  const Vec3 rel = p_body - cam.p_c;
  const double range = rel.norm();
  if (!(range > d_min)) {
    std::ostringstream os;
    os << "landmark " << lm.id << " is " << range << " m from camera " << cam.cam_id;
    throw Error(ErrorCode::LandmarkAtCamera, os.str());
  }
  return UnitVector3::from(cam.R_c.matrix().transpose() * rel / range, 1e-12);
}

Vec3 synth_position(const RigidBodyState& state, const Landmark& lm) {
  return state.R.matrix().transpose() * (lm.position - state.p);
}

BearingFrame apply_noise(const BearingFrame& frame, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) {
    throw Error(ErrorCode::ValidationError, "bearing noise sigma must be >= 0");
  }
  if (sigma == 0.0) return frame;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  BearingFrame out = frame;
  for (auto& ob : out.observations) {
    const Vec3 n(sigma * n01(rng), sigma * n01(rng), sigma * n01(rng));
    ob.y = UnitVector3::normalize(exp_so3(n).matrix() * ob.y.vec());
  }
  return out;
}

bool VisibilityModel::visible(const RigidBodyState& state, const Landmark& lm,
                              const CameraExtrinsics& cam) const {
  const Vec3 p_body = state.R.matrix().transpose() * (lm.position - state.p);
  const Vec3 p_cam = cam.R_c.matrix().transpose() * (p_body - cam.p_c);
  const double range = p_cam.norm();
  if (!(range > kDefaultMinRange) || range > max_range) return false;
  if (fov_half_angle > 0.0) {
    const double c = p_cam.z() / range;
    if (c < std::cos(fov_half_angle)) return false;
  }
  return true;
}

std::vector<Landmark> random_landmarks(int count, double half_extent, LandmarkLayout layout,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0));
  std::uniform_real_distribution<double> u(-half_extent, half_extent);
  std::vector<Landmark> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec3 p(u(rng), u(rng), u(rng));
    if (layout == LandmarkLayout::Coplanar) p.z() = -1.0;
    out.push_back({i + 1, p});
  }
  return out;
}

SynthFrames synth_frames(const RigidBodyState& state, const std::vector<Landmark>& landmarks,
                         const std::vector<CameraExtrinsics>& rig, const VisibilityModel& vis,
                         const std::optional<CameraLoss>& loss) {
  SynthFrames out;
  out.bearings.t = state.t;
  out.positions.t = state.t;
  for (const auto& lm : landmarks) {
    int seen_by = 0;
    for (const auto& cam : rig) {
      if (loss && loss->cam_id == cam.cam_id && state.t >= loss->t) continue;
      if (!vis.visible(state, lm, cam)) continue;
      out.bearings.observations.push_back({cam.cam_id, lm.id, synth_bearing(state, lm, cam)});
      ++seen_by;
    }
    const bool triangulable = rig.size() >= 2 ? seen_by >= 2 : seen_by >= 1;
    if (triangulable) out.positions.observations.push_back({lm.id, synth_position(state, lm)});
  }
  return out;
}

Dataset simulate_dataset(const SimConfig& cfg) {
  if (!(cfg.duration > 0.0) || !(cfg.imu_rate > 0.0) || !(cfg.vision_rate > 0.0)) {
    throw Error(ErrorCode::ConfigError, "duration, imu_rate and vision_rate must be positive");
  }
  const double imu_dt = 1.0 / cfg.imu_rate;
  const EightTrajectory traj(cfg.duration, imu_dt, cfg.gravity);

  Dataset ds;
  ds.extrinsics = cfg.rig;
  ds.landmarks = LandmarkMap(
      random_landmarks(cfg.num_landmarks, cfg.landmark_half_extent, cfg.layout, cfg.seed));

  std::mt19937_64 imu_rng(mix_seed(cfg.seed, 1));
  std::normal_distribution<double> n01(0.0, 1.0);
  const auto n_imu = static_cast<std::size_t>(std::floor(cfg.duration * cfg.imu_rate + 1e-9));
  ds.imu.reserve(n_imu + 1);
  ds.groundtruth.reserve(n_imu + 1);
  for (std::size_t k = 0; k <= n_imu; ++k) {
    const double t = static_cast<double>(k) * imu_dt;
    const RigidBodyState s = traj.state(t);
    ImuSample imu{t, s.omega, s.a};
    if (cfg.gyro_noise > 0.0) {
      imu.omega += cfg.gyro_noise * Vec3(n01(imu_rng), n01(imu_rng), n01(imu_rng));
    }
    if (cfg.accel_noise > 0.0) {
      imu.a += cfg.accel_noise * Vec3(n01(imu_rng), n01(imu_rng), n01(imu_rng));
    }
    ds.imu.push_back(imu);
    ds.groundtruth.push_back({t, s.R, s.p, s.v});
  }

  std::mt19937_64 pos_rng(mix_seed(cfg.seed, 2));
  const auto n_vis = static_cast<std::size_t>(std::floor(cfg.duration * cfg.vision_rate + 1e-9));
  const auto landmarks = ds.landmarks.to_vector();
  for (std::size_t k = 0; k <= n_vis; ++k) {
    const double t = static_cast<double>(k) / cfg.vision_rate;
    const RigidBodyState s = traj.state(t);
    SynthFrames sf = synth_frames(s, landmarks, cfg.rig, cfg.visibility, cfg.camera_loss);
    BearingFrame& frame = sf.bearings;
    PositionFrame& pframe = sf.positions;
    if (cfg.position_noise > 0.0) {
      for (auto& ob : pframe.observations) {
        ob.y += cfg.position_noise * Vec3(n01(pos_rng), n01(pos_rng), n01(pos_rng));
      }
    }
    if (cfg.bearing_noise > 0.0) {
      frame = apply_noise(frame, cfg.bearing_noise, mix_seed(cfg.seed, 1000 + k));
    }
    if (!frame.observations.empty()) ds.bearings.push_back(std::move(frame));
    if (!pframe.observations.empty()) ds.positions.push_back(std::move(pframe));
  }
  return ds;
}

}  // namespace vinobs
