#include <benchmark/benchmark.h>

#include "vinobs/continuous.hpp"
#include "vinobs/degeneracy.hpp"
#include "vinobs/hybrid.hpp"
#include "vinobs/inputs.hpp"
#include "vinobs/innovation.hpp"
#include "vinobs/observability.hpp"
#include "vinobs/simworld.hpp"

using namespace vinobs;

namespace {

const EightTrajectory& trajectory() {
  static const EightTrajectory traj(20.0);
  return traj;
}

const std::vector<Landmark>& landmarks() {
  static const auto lms = random_landmarks(5, 5.0, LandmarkLayout::RandomCube, 1);
  return lms;
}

ObserverModel model(MeasurementMode mode) {
  ObserverModel m;
  m.sensors.mode = mode;
  m.sensors.rig = default_stereo_rig();
  m.sensors.landmarks = LandmarkMap(landmarks());
  return m;
}

void BM_ContinuousStep(benchmark::State& state) {
  const auto mode = static_cast<MeasurementMode>(state.range(0));
  const TrajectoryInputs src(trajectory(), landmarks(), default_stereo_rig());
  const ObserverModel m = model(mode);
  ObserverState est;
  est.R_hat = exp_so3(Vec3(0.3, -0.2, 0.1));
  est.t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(est, src, m, 1.0 / 200.0));
  }
  state.SetLabel(to_string(mode));
}
BENCHMARK(BM_ContinuousStep)
    ->Arg(static_cast<int>(MeasurementMode::Position3d))
    ->Arg(static_cast<int>(MeasurementMode::Stereo))
    ->Arg(static_cast<int>(MeasurementMode::Monocular));

void BM_StereoInnovation(benchmark::State& state) {
  const auto rig = default_stereo_rig();
  const SynthFrames f = synth_frames(trajectory().state(2.0), landmarks(), rig, {}, std::nullopt);
  const LandmarkMap lms(landmarks());
  ObserverState est;
  for (auto _ : state) {
    benchmark::DoNotOptimize(innovation_stereo(est, f.bearings, rig[0], rig[1], lms));
  }
}
BENCHMARK(BM_StereoInnovation);

void BM_HybridJump(benchmark::State& state) {
  const auto rig = default_stereo_rig();
  const SynthFrames f = synth_frames(trajectory().state(2.0), landmarks(), rig, {}, std::nullopt);
  const LandmarkMap lms(landmarks());
  ObserverState est;
  const Innovation inn = innovation_stereo(est, f.bearings, rig[0], rig[1], lms);
  const Eigen::MatrixXd qinv = Eigen::MatrixXd::Identity(inn.C.rows(), inn.C.rows()) * 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(jump(est, inn, qinv));
  }
}
BENCHMARK(BM_HybridJump);

void BM_TransitionMatrix(benchmark::State& state) {
  const Vec3 g = kDefaultGravity;
  const MatrixFunction A = [g](double t) { return build_A(EightTrajectory::omega(t), g); };
  const double len = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transition_matrix(A, 1.0, 1.0 + len, 1e-3));
  }
}
BENCHMARK(BM_TransitionMatrix)->Arg(1)->Arg(10);

void BM_GramianContinuous(benchmark::State& state) {
  const Vec3 g = kDefaultGravity;
  const MatrixFunction A = [g](double t) { return build_A(EightTrajectory::omega(t), g); };
  const auto rig = default_stereo_rig();
  const LandmarkMap lms(landmarks());
  OutputPath path;
  for (int k = 0; k <= 200; ++k) {
    const double t = 1.0 + k * 0.005;
    const SynthFrames f = synth_frames(trajectory().state(t), landmarks(), rig, {}, std::nullopt);
    path.t.push_back(t);
    path.C.push_back(innovation_stereo(EstimateView{}, f.bearings, rig[0], rig[1], lms).C);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(gramian_continuous(A, path, 1.0, 1.0, 1e-6));
  }
}
BENCHMARK(BM_GramianContinuous)->Unit(benchmark::kMillisecond);

void BM_ClassifyStatic(benchmark::State& state) {
  const LandmarkMap lms(random_landmarks(static_cast<int>(state.range(0)), 5.0,
                                         LandmarkLayout::RandomCube, 3));
  const Vec3 p_prime(0.5, -0.5, 8.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_static_degeneracy(lms, p_prime, kDefaultGravity));
  }
}
BENCHMARK(BM_ClassifyStatic)->Arg(5)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
