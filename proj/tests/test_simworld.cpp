#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vinobs/errors.hpp"
#include "vinobs/simworld.hpp"

namespace vinobs {
namespace {

constexpr double kPi = 3.14159265358979323846;

TEST(EightTrajectory, InitialState) {
  const EightTrajectory traj(1.0);
  const RigidBodyState s = traj.state(0.0);
  EXPECT_LT((s.p - Vec3(0, 0, 2)).norm(), 1e-15);
  EXPECT_LT((s.v - Vec3(2, 2, 0)).norm(), 1e-15);
  EXPECT_LT((s.omega - Vec3(-1, 1, 0)).norm(), 1e-15);
  EXPECT_LT((s.a - Vec3(0, 0, 9.81)).norm(), 1e-12);
  EXPECT_TRUE(s.R.matrix() == Mat3::Identity());
}

TEST(EightTrajectory, AccelerationMatchesKinematics) {
  const EightTrajectory traj(10.0);
  for (double t = 0.0; t <= 10.0; t += 0.37) {
    const RigidBodyState s = traj.state(t);
    const Vec3 vdot = 2.0 * Vec3(-std::sin(t), -2.0 * std::sin(2.0 * t), 0.0);
    EXPECT_LT((s.a - s.R.matrix().transpose() * (vdot - traj.gravity())).norm(), 1e-12);
  }
}

TEST(EightTrajectory, NumericDerivatives) {
  const EightTrajectory traj(10.0);
  const double h = 1e-4;
  for (double t = 0.5; t < 9.5; t += 0.71) {
    const RigidBodyState a = traj.state(t - h);
    const RigidBodyState b = traj.state(t + h);
    const RigidBodyState s = traj.state(t);
    EXPECT_LT(((b.p - a.p) / (2 * h) - s.v).norm(), 1e-7);
    const Vec3 vdot = (b.v - a.v) / (2 * h);
    EXPECT_LT((vdot - (traj.gravity() + s.R.matrix() * s.a)).norm(), 1e-6);
  }
}

TEST(EightTrajectory, AttitudeStaysOnManifold) {
  const EightTrajectory traj(20.0);
  for (double t = 0.0; t <= 20.0; t += 0.013) {
    const Rotation r = traj.attitude(t);
    EXPECT_LT(r.orthonormality_error(), 1e-9);
    EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-9);
  }
}

TEST(EightTrajectory, AttitudeMatchesFineIntegration) {
  const EightTrajectory traj(5.0);
  // Reference: plain RK4 with a step 20x smaller, no re-projection.
  Mat3 r = Mat3::Identity();
  const double h = traj.dt() / 20.0;
  double t = 0.0;
  for (int k = 0; k < static_cast<int>(std::lround(5.0 / h)); ++k) {
    auto f = [](double tau, const Mat3& m) {
      return Mat3(m * oracle::cross_matrix(EightTrajectory::omega(tau)));
    };
    const Mat3 k1 = f(t, r);
    const Mat3 k2 = f(t + h / 2, r + h / 2 * k1);
    const Mat3 k3 = f(t + h / 2, r + h / 2 * k2);
    const Mat3 k4 = f(t + h, r + h * k3);
    r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  EXPECT_LT((traj.attitude(5.0).matrix() - r).norm(), 1e-8);
  EXPECT_LT((traj.attitude(2.5025).matrix() - traj.state(2.5025).R.matrix()).norm(), 1e-15);
}

TEST(EightTrajectory, RejectsOutOfRange) {
  const EightTrajectory traj(1.0);
  EXPECT_THROW(traj.state(-0.1), Error);
  EXPECT_THROW(traj.state(1.5), Error);
}

TEST(SynthBearing, Examples) {
  RigidBodyState s;
  CameraExtrinsics cam;
  EXPECT_LT((synth_bearing(s, {1, Vec3(1, 0, 0)}, cam).vec() - Vec3(1, 0, 0)).norm(), 1e-15);
  cam.p_c = Vec3(0, 0, 0.1);
  EXPECT_LT((synth_bearing(s, {1, Vec3(0, 0, 1.1)}, cam).vec() - Vec3(0, 0, 1)).norm(), 1e-15);
}

TEST(SynthBearing, LandmarkAtCamera) {
  RigidBodyState s;
  CameraExtrinsics cam;
  cam.p_c = Vec3(0.2, 0, 0);
  try {
    synth_bearing(s, {1, Vec3(0.2, 0, 0)}, cam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LandmarkAtCamera);
  }
}

TEST(SynthBearing, RandomPoses) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    RigidBodyState s;
    s.R = Rotation::from_matrix(oracle::random_rotation(rng));
    s.p = oracle::random_vector(rng, 3.0);
    CameraExtrinsics cam{1, Rotation::from_matrix(oracle::random_rotation(rng)),
                         oracle::random_vector(rng, 0.2)};
    const Landmark lm{1, oracle::random_vector(rng, 5.0)};
    const Vec3 y = synth_bearing(s, lm, cam).vec();
    EXPECT_NEAR(y.norm(), 1.0, 1e-12);
    const Vec3 d = s.R.matrix().transpose() * (lm.position - s.p) - cam.p_c;
    EXPECT_LT((cam.R_c.matrix() * y).cross(d.normalized()).norm(), 1e-12);
    EXPECT_GT((cam.R_c.matrix() * y).dot(d), 0.0);
    EXPECT_LT((y - oracle::bearing(s.R.matrix(), s.p, lm.position, cam.R_c.matrix(), cam.p_c))
                  .norm(),
              1e-12);
  }
}

TEST(SynthPosition, Examples) {
  RigidBodyState s;
  EXPECT_TRUE(synth_position(s, {1, Vec3(1, 2, 3)}) == Vec3(1, 2, 3));
  s.R = exp_so3(Vec3(0, 0, kPi / 2));
  EXPECT_LT((synth_position(s, {1, Vec3(1, 0, 0)}) - Vec3(0, -1, 0)).norm(), 1e-15);
  s.p = Vec3(4, 5, 6);
  EXPECT_TRUE(synth_position(s, {1, Vec3(4, 5, 6)}).isZero(0.0));
}

TEST(StereoPair, TriangulatesNoiseless) {
  const EightTrajectory traj(10.0);
  const auto rig = default_stereo_rig();
  const auto lms = random_landmarks(5, 5.0, LandmarkLayout::RandomCube, 3);
  for (double t = 0.0; t <= 10.0; t += 0.9) {
    const RigidBodyState s = traj.state(t);
    for (const auto& lm : lms) {
      // Rays c_s + lambda_s d_s in the inertial frame; closest-point pair.
      Vec3 c[2], d[2];
      for (int k = 0; k < 2; ++k) {
        c[k] = s.p + s.R.matrix() * rig[static_cast<std::size_t>(k)].p_c;
        d[k] = s.R.matrix() * rig[static_cast<std::size_t>(k)].R_c.matrix() *
               synth_bearing(s, lm, rig[static_cast<std::size_t>(k)]).vec();
      }
      Eigen::Matrix<double, 3, 2> a;
      a << d[0], -d[1];
      const Eigen::Vector2d lam = a.colPivHouseholderQr().solve(c[1] - c[0]);
      const Vec3 x0 = c[0] + lam(0) * d[0];
      const Vec3 x1 = c[1] + lam(1) * d[1];
      EXPECT_LT((x0 - x1).norm(), 1e-9);
      EXPECT_LT((x0 - lm.position).norm(), 1e-9);
    }
  }
}

BearingFrame sample_frame() {
  BearingFrame f;
  f.t = 1.0;
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    f.observations.push_back({1, i, UnitVector3::from(oracle::random_unit(rng))});
  }
  return f;
}

TEST(ApplyNoise, ZeroSigmaIsIdentity) {
  const BearingFrame f = sample_frame();
  const BearingFrame g = apply_noise(f, 0.0, 5);
  ASSERT_EQ(f.observations.size(), g.observations.size());
  for (std::size_t k = 0; k < f.observations.size(); ++k) {
    EXPECT_TRUE(f.observations[k].y.vec() == g.observations[k].y.vec());
  }
}

TEST(ApplyNoise, Deterministic) {
  const BearingFrame f = sample_frame();
  const BearingFrame a = apply_noise(f, 0.05, 17);
  const BearingFrame b = apply_noise(f, 0.05, 17);
  const BearingFrame c = apply_noise(f, 0.05, 18);
  bool differs = false;
  for (std::size_t k = 0; k < f.observations.size(); ++k) {
    EXPECT_TRUE(a.observations[k].y.vec() == b.observations[k].y.vec());
    EXPECT_NEAR(a.observations[k].y.vec().norm(), 1.0, 1e-12);
    differs = differs || a.observations[k].y.vec() != c.observations[k].y.vec();
  }
  EXPECT_TRUE(differs);
}

TEST(ApplyNoise, MeanAngularDeviation) {
  // Only the rotation component normal to y moves it: the deviation is the
  // norm of a 2D Gaussian with per-axis sigma (Rayleigh mean sigma sqrt(pi/2)).
  const double sigma = 0.01;
  BearingFrame f;
  f.observations.push_back({1, 1, UnitVector3::from(Vec3(0.6, 0, 0.8))});
  double sum = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const BearingFrame g = apply_noise(f, sigma, static_cast<std::uint64_t>(k) + 1);
    const double c = std::clamp(g.observations[0].y.vec().dot(f.observations[0].y.vec()), -1.0,
                                1.0);
    sum += std::acos(c);
  }
  const double expect = sigma * std::sqrt(kPi / 2.0);
  EXPECT_NEAR(sum / n, expect, 0.2 * expect);
}

TEST(RandomLandmarks, LayoutsAndDeterminism) {
  const auto a = random_landmarks(50, 5.0, LandmarkLayout::RandomCube, 9);
  const auto b = random_landmarks(50, 5.0, LandmarkLayout::RandomCube, 9);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(a[k].position == b[k].position);
    EXPECT_LE(a[k].position.cwiseAbs().maxCoeff(), 5.0);
    EXPECT_EQ(a[k].id, static_cast<int>(k) + 1);
  }
  for (const auto& lm : random_landmarks(20, 5.0, LandmarkLayout::Coplanar, 9)) {
    EXPECT_EQ(lm.position.z(), -1.0);
  }
}

TEST(Visibility, FieldOfViewAndRange) {
  RigidBodyState s;
  CameraExtrinsics cam;
  VisibilityModel vis;
  EXPECT_TRUE(vis.visible(s, {1, Vec3(0, 0, -3)}, cam));
  vis.fov_half_angle = kPi / 4;
  EXPECT_TRUE(vis.visible(s, {1, Vec3(0.5, 0, 3)}, cam));
  EXPECT_FALSE(vis.visible(s, {1, Vec3(0, 0, -3)}, cam));
  EXPECT_FALSE(vis.visible(s, {1, Vec3(4, 0, 3)}, cam));
  vis.max_range = 2.0;
  EXPECT_FALSE(vis.visible(s, {1, Vec3(0.5, 0, 3)}, cam));
}

TEST(SynthFrames, PositionsNeedTwoCameras) {
  const EightTrajectory traj(10.0);
  const auto lms = random_landmarks(5, 5.0, LandmarkLayout::RandomCube, 3);
  const RigidBodyState s = traj.state(6.0);
  const SynthFrames both = synth_frames(s, lms, default_stereo_rig(), {}, std::nullopt);
  EXPECT_EQ(both.bearings.observations.size(), 10u);
  EXPECT_EQ(both.positions.observations.size(), 5u);
  const SynthFrames lost = synth_frames(s, lms, default_stereo_rig(), {}, CameraLoss{2, 5.0});
  EXPECT_EQ(lost.bearings.observations.size(), 5u);
  EXPECT_TRUE(lost.positions.observations.empty());
  for (const auto& ob : lost.bearings.observations) EXPECT_EQ(ob.cam_id, 1);

  const std::vector<CameraExtrinsics> mono{default_stereo_rig()[0]};
  const SynthFrames single = synth_frames(s, lms, mono, {}, std::nullopt);
  EXPECT_EQ(single.positions.observations.size(), 5u);
  for (const auto& ob : both.positions.observations) {
    EXPECT_LT((ob.y - synth_position(s, lms[static_cast<std::size_t>(ob.landmark_id - 1)])).norm(),
              1e-15);
  }
}

TEST(SimulateDataset, StreamsAndDeterminism) {
  SimConfig cfg;
  cfg.duration = 2.0;
  cfg.vision_rate = 20.0;
  cfg.bearing_noise = 0.01;
  cfg.gyro_noise = 0.01;
  const Dataset a = simulate_dataset(cfg);
  const Dataset b = simulate_dataset(cfg);
  EXPECT_NO_THROW(a.validate());
  EXPECT_EQ(a.imu.size(), 401u);
  EXPECT_EQ(a.groundtruth.size(), 401u);
  EXPECT_EQ(a.bearings.size(), 41u);
  EXPECT_EQ(a.landmarks.size(), 5u);
  EXPECT_EQ(a.extrinsics.size(), 2u);
  for (std::size_t k = 0; k < a.imu.size(); ++k) {
    EXPECT_EQ(a.imu[k].omega, b.imu[k].omega);
    EXPECT_EQ(a.imu[k].t, a.groundtruth[k].t);
  }
  for (std::size_t k = 0; k < a.bearings.size(); ++k) {
    for (std::size_t j = 0; j < a.bearings[k].observations.size(); ++j) {
      EXPECT_EQ(a.bearings[k].observations[j].y.vec(), b.bearings[k].observations[j].y.vec());
    }
  }
}

}  // namespace
}  // namespace vinobs
