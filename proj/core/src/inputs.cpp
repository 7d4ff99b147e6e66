#include "vinobs/inputs.hpp"

#include <algorithm>
#include <cmath>

namespace vinobs {

namespace {

constexpr double kTimeEps = 1e-9;

template <class Frame>
std::pair<const Frame*, const Frame*> bracket(const std::vector<Frame>& frames, double t) {
  if (frames.empty()) return {nullptr, nullptr};
  if (t < frames.front().t - kTimeEps || t > frames.back().t + kTimeEps) return {nullptr, nullptr};
  auto it = std::lower_bound(frames.begin(), frames.end(), t,
                             [](const Frame& f, double x) { return f.t < x; });
  if (it != frames.end() && std::abs(it->t - t) <= kTimeEps) return {&*it, &*it};
  if (it != frames.begin() && std::abs((it - 1)->t - t) <= kTimeEps) return {&*(it - 1), &*(it - 1)};
  if (it == frames.end() || it == frames.begin()) return {nullptr, nullptr};
  return {&*(it - 1), &*it};
}

}  // namespace

TrajectoryInputs::TrajectoryInputs(const EightTrajectory& traj, std::vector<Landmark> landmarks,
                                   std::vector<CameraExtrinsics> rig, VisibilityModel vis,
                                   std::optional<CameraLoss> loss)
    : traj_(traj),
      landmarks_(std::move(landmarks)),
      rig_(std::move(rig)),
      vis_(vis),
      loss_(loss) {}

ImuSample TrajectoryInputs::imu(double t) const {
  const RigidBodyState s = traj_.state(std::min(t, traj_.t_end()));
  return {t, s.omega, s.a};
}

std::optional<MeasurementSet> TrajectoryInputs::measurement(double t) const {
  const RigidBodyState s = traj_.state(std::min(t, traj_.t_end()));
  SynthFrames sf = synth_frames(s, landmarks_, rig_, vis_, loss_);
  MeasurementSet m;
  m.t = t;
  m.bearings = std::move(sf.bearings);
  if (!position_cutoff_ || t < *position_cutoff_) m.positions = std::move(sf.positions);
  return m;
}

DatasetInputs::DatasetInputs(const Dataset& ds)
    : imu_(ds.imu), bearings_(ds.bearings), positions_(ds.positions) {}

std::optional<MeasurementSet> DatasetInputs::measurement(double t) const {
  MeasurementSet m;
  m.t = t;
  bool any = false;
  if (auto [a, b] = bracket(bearings_, t); a) {
    if (a == b) {
      m.bearings = *a;
    } else {
      const double w = (t - a->t) / (b->t - a->t);
      BearingFrame f;
      f.t = t;
      for (const auto& oa : a->observations) {
        const BearingObservation* ob = b->find(oa.cam_id, oa.landmark_id);
        if (!ob) continue;
        const Vec3 y = (1.0 - w) * oa.y.vec() + w * ob->y.vec();
        if (y.norm() < 1e-6) continue;
        f.observations.push_back({oa.cam_id, oa.landmark_id, UnitVector3::normalize(y)});
      }
      m.bearings = std::move(f);
    }
    any = true;
  }
  if (auto [a, b] = bracket(positions_, t); a) {
    if (a == b) {
      m.positions = *a;
    } else {
      const double w = (t - a->t) / (b->t - a->t);
      PositionFrame f;
      f.t = t;
      for (const auto& oa : a->observations) {
        for (const auto& ob : b->observations) {
          if (ob.landmark_id != oa.landmark_id) continue;
          f.observations.push_back({oa.landmark_id, (1.0 - w) * oa.y + w * ob.y});
          break;
        }
      }
      m.positions = std::move(f);
    }
    any = true;
  }
  if (!any) return std::nullopt;
  return m;
}

}  // namespace vinobs
