#pragma once

// The eight-trajectory simulation setup shared by the estimator tests and the
// acceptance suite.

#include <cmath>
#include <functional>
#include <vector>

#include "vinobs/continuous.hpp"
#include "vinobs/inputs.hpp"
#include "vinobs/observer_state.hpp"
#include "vinobs/simworld.hpp"

namespace vinobs::scenario {

constexpr double kPi = 3.14159265358979323846;

inline std::vector<Landmark> landmarks(std::uint64_t seed = 1, int n = 5) {
  return random_landmarks(n, 5.0, LandmarkLayout::RandomCube, seed);
}

inline ObserverModel model(MeasurementMode mode, const std::vector<Landmark>& lms,
                           std::vector<CameraExtrinsics> rig = default_stereo_rig()) {
  ObserverModel m;
  m.sensors.mode = mode;
  m.sensors.rig = std::move(rig);
  m.sensors.landmarks = LandmarkMap(lms);
  m.gravity = kDefaultGravity;
  return m;
}

// R_hat(0) = exp(0.5 pi u^x), u = (1, 1, 1) / sqrt(3); p_hat = v_hat = 0, e_hat = e_i, P = I.
inline ObserverState initial_state() {
  ObserverState s;
  s.R_hat = exp_so3(0.5 * kPi * Vec3(1, 1, 1).normalized());
  return s;
}

inline ObserverState truth_state(const RigidBodyState& truth) {
  ObserverState s;
  s.t = truth.t;
  s.R_hat = truth.R;
  s.p_hat = truth.p;
  s.v_hat = truth.v;
  return s;
}

struct Sample {
  double t;
  double att;
  double att_frob;  // ||R_tilde - I||_F, resolves errors below the sqrt floor of dist_I
  double pos;
  double vel;
  Vec15 x;
  Mat15 P;
};

// Continuous observer on exact inputs from the trajectory, one callback per step.
inline ObserverState run(const EightTrajectory& traj, const TrajectoryInputs& src,
                         const ObserverModel& m, const ObserverState& init, double t_end,
                         const std::function<void(const Sample&)>& on = {},
                         double dt = 1.0 / 200.0) {
  return run_continuous(init, src, m, t_end, dt, [&](const ObserverState& s) {
    if (!on) return;
    const ErrorState e = error_state(traj.state(s.t), s);
    on({s.t, dist_I(e.R_tilde), (e.R_tilde.matrix() - Mat3::Identity()).norm(), e.x_tilde.p().norm(), e.x_tilde.v().norm(), e.x_tilde.x, s.P});
  });
}

}  // namespace vinobs::scenario
