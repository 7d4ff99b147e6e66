// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "configs.hpp"
#include "draws.hpp"
#include "oracles.hpp"
#include "paths.hpp"
#include "scenario.hpp"
#include "vinobs/continuous.hpp"
#include "vinobs/degeneracy.hpp"
#include "vinobs/geom.hpp"
#include "vinobs/innovation.hpp"
#include "vinobs/observability.hpp"
#include "vinobs/pipeline.hpp"

using namespace vinobs;

namespace {

constexpr double kPi = 3.14159265358979323846;
const Vec3 g = kDefaultGravity;
const MeasurementMode kModes[] = {MeasurementMode::Position3d, MeasurementMode::Stereo,
                                  MeasurementMode::Monocular};

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// --- criteria 1 and 3 share the continuous runs ---

struct ModeRun {
  MeasurementMode mode;
  double att, pos, vel, seconds;
  double decay_rate;
  double worst_lp_rise;       // max over steps in the decay window of (L_{k+1} - L_k) / L_k
  double worst_lp_rise_full;  // same over the whole run
};

std::vector<ModeRun> continuous_runs() {
  constexpr double kEnd = 20.0, kStep = 1e-3;
  constexpr double kWindow0 = 2.0, kWindow1 = 15.0;
  // Fine ground-truth grid: the default grid's sub-step interpolation limits how far x_tilde can decay.
  const EightTrajectory traj(kEnd, 5e-4);
  const auto lms = scenario::landmarks();
  std::vector<ModeRun> out;
  for (MeasurementMode mode : kModes) {
    const TrajectoryInputs src(traj, lms, default_stereo_rig());
    const ObserverModel m = scenario::model(mode, lms);
    std::vector<double> ts, xs;
    double prev_lp = -1.0, worst = -1e300, worst_full = -1e300;
    const auto t0 = std::chrono::steady_clock::now();
    ModeRun r{mode, 0, 0, 0, 0, 0, 0, 0};
    scenario::run(traj, src, m, scenario::initial_state(), kEnd, [&](const scenario::Sample& s) {
      const double lp = s.x.dot(s.P.ldlt().solve(s.x));
      const bool in_window = s.t >= kWindow0 - 1e-9 && s.t <= kWindow1 + 1e-9;
      if (prev_lp > 0.0) {
        const double rise = (lp - prev_lp) / prev_lp;
        worst_full = std::max(worst_full, rise);
        if (in_window) worst = std::max(worst, rise);
      }
      prev_lp = lp;
      if (in_window) {
        ts.push_back(s.t);
        xs.push_back(s.x.norm());
      }
      r.att = s.att;
      r.pos = s.pos;
      r.vel = s.vel;
    }, kStep);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.decay_rate = oracle::decay_rate(ts, xs);
    r.worst_lp_rise = worst;
    r.worst_lp_rise_full = worst_full;
    out.push_back(r);
  }
  return out;
}

Outcome criterion1(const std::vector<ModeRun>& runs) {
  constexpr double kAtt = 0.05, kPos = 0.05, kVel = 0.05, kSeconds = 60.0;
  bool ok = true;
  std::ostringstream os;
  for (const ModeRun& r : runs) {
    ok = ok && r.att < kAtt && r.pos < kPos && r.vel < kVel && r.seconds < kSeconds;
    os << to_string(r.mode) << " att=" << r.att << " pos=" << r.pos << " vel=" << r.vel
       << " t=" << r.seconds << "s; ";
  }
  return {ok, os.str()};
}

Outcome criterion3(const std::vector<ModeRun>& runs) {
  constexpr double kRate = 0.05, kRise = 1e-6;
  bool ok = true;
  std::ostringstream os;
  for (const ModeRun& r : runs) {
    ok = ok && r.decay_rate > kRate && r.worst_lp_rise <= kRise;
    os << to_string(r.mode) << " rate=" << r.decay_rate << "/s max L_P rise in [2,15] s="
       << r.worst_lp_rise << " (whole run " << r.worst_lp_rise_full << "); ";
  }
  return {ok, os.str()};
}

Outcome criterion2() {
  constexpr double kTol = 1e-9;
  constexpr int kDraws = 1000;
  std::mt19937_64 rng(2024);
  double worst[3] = {0, 0, 0};
  for (int k = 0; k < kDraws; ++k) {
    const draws::Draw d = draws::random_draw(rng, 1 + k % 8);
    const Vec15 x = error_state(d.truth, d.est).x_tilde.x;
    const Innovation inn[3] = {innovation_position(d.est, d.positions, d.lms),
                               innovation_stereo(d.est, d.frame, d.rig[0], d.rig[1], d.lms),
                               innovation_mono(d.est, d.frame, d.rig[0], d.lms)};
    for (int m = 0; m < 3; ++m) {
      worst[m] = std::max(worst[m], (inn[m].sigma_y - inn[m].C * x).cwiseAbs().maxCoeff());
    }
  }
  std::ostringstream os;
  os << "max residual position3d=" << worst[0] << " stereo=" << worst[1]
     << " monocular=" << worst[2] << " over " << kDraws << " draws";
  return {worst[0] <= kTol && worst[1] <= kTol && worst[2] <= kTol, os.str()};
}

Outcome criterion4() {
  constexpr double kTol = 1e-6;
  constexpr int kWindows = 50;
  const Mat15 Abar = build_A(Vec3::Zero(), g);
  const double cube = (Abar * Abar * Abar).cwiseAbs().maxCoeff();

  const EightTrajectory traj(20.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> start(0.0, 17.0), len(0.05, 3.0);
  double worst = 0.0;
  for (int k = 0; k < kWindows; ++k) {
    const double tau = start(rng), t = tau + len(rng);
    const Mat15 Phi = transition_matrix(paths::exact_A(g), tau, t, 1e-3);
    const Mat15 oracle = paths::T_of(traj.state(t).R.matrix()) * nilpotent_exp(g, t - tau) *
                         paths::T_of(traj.state(tau).R.matrix()).transpose();
    worst = std::max(worst, (Phi - oracle).cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "max|Abar^3|=" << cube << " max factorization error=" << worst << " over " << kWindows
     << " windows";
  return {cube == 0.0 && worst <= kTol, os.str()};
}

Outcome criterion5() {
  constexpr double kTol = 1e-9;
  const Mat3 m = Vec3(0.5, 0.3, 0.2).asDiagonal();
  std::mt19937_64 rng(5);
  double id_err = 0.0, lower_viol = 0.0, upper_viol = 0.0, e_viol = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Rotation r = Rotation::from_matrix(oracle::random_rotation(rng));
    const Lemma4Quantities q = lemma4_quantities(m, r);
    const Mat3 imr = Mat3::Identity() - r.matrix();
    id_err = std::max(id_err, std::abs(psi_a(m * r.matrix()).squaredNorm() -
                                       q.alpha * (imr * q.m_under).trace()));
    const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Mat3>(q.m_bar).eigenvalues();
    const double d2 = dist_I(r) * dist_I(r);
    const double tr = (imr * m).trace();
    lower_viol = std::max(lower_viol, 4.0 * ev.minCoeff() * d2 - tr);
    upper_viol = std::max(upper_viol, tr - 4.0 * ev.maxCoeff() * d2);
    e_viol = std::max(e_viol, q.e.norm() - q.m_bar.norm());
  }
  std::ostringstream os;
  os << "identity err=" << id_err << " lower bound excess=" << lower_viol
     << " upper bound excess=" << upper_viol << " E-norm excess=" << e_viol;
  return {id_err <= kTol && lower_viol <= kTol && upper_viol <= kTol && e_viol <= kTol, os.str()};
}

Outcome criterion6() {
  constexpr int kPerCase = 100;
  using Gen = configs::StaticScene (*)(std::mt19937_64&, const Vec3&);
  const Gen gens[] = {&configs::generic, &configs::coplanar, &configs::gravity_plane,
                      &configs::camera_aligned, &configs::mixed};
  int wrong = 0, total = 0;
  std::ostringstream os;
  for (Gen gen : gens) {
    int bad = 0;
    DegeneracyCase expected = DegeneracyCase::Generic;
    for (int seed = 0; seed < kPerCase; ++seed) {
      std::mt19937_64 rng(1000 + seed);
      const configs::StaticScene s = gen(rng, g);
      expected = s.expected;
      const DegeneracyVerdict v = classify_static_degeneracy(s.landmarks, s.p_prime, g);
      const int full = 15 + static_cast<int>(s.landmarks.size());
      const bool rank_ok = s.expected == DegeneracyCase::Generic ? v.rank_O_prime == full
                                                                 : v.rank_O_prime < full;
      if (v.case_label != s.expected || !rank_ok) ++bad;
      ++total;
    }
    wrong += bad;
    os << to_string(expected) << " " << bad << "/" << kPerCase << " wrong; ";
  }
  os << "total " << wrong << "/" << total;
  return {wrong == 0, os.str()};
}

Outcome criterion7() {
  constexpr double kMargin = 1e-6, kRatio = 1e-8;
  const EightTrajectory traj(20.0);
  const std::vector<Landmark> good{{1, Vec3(1.0, 0.0, 0.0)}, {2, Vec3(-1.0, 1.0, 0.0)}, {3, Vec3(0.0, -1.0, 0.5)}};
  const std::vector<Landmark> collinear{{1, Vec3(1.0, 0.0, 0.0)}, {2, Vec3(2.0, 0.5, 0.0)}, {3, Vec3(3.0, 1.0, 0.0)}};
  const MatrixFunction A = paths::exact_A(g);
  const GramianReport pass_r =
      gramian_continuous(A, paths::stereo_path(traj, good, 0.0, 2.0, 0.005), 0.0, 2.0, kMargin);
  const GramianReport fail_r = gramian_continuous(
      A, paths::stereo_path(traj, collinear, 0.0, 2.0, 0.005), 0.0, 2.0, kMargin);

  const auto lms = scenario::landmarks();
  const auto eight = paths::inertial_bearings(traj, lms, default_stereo_rig()[0], 20.0, 0.05);
  const MonoMotionResult mono_eight = check_mono_motion(eight, {lms[0].id, lms[1].id, lms[2].id}, 0.1, 2.0);

  // Camera receding along the ray from landmark 1.
  const std::vector<Landmark> rlms{{1, Vec3::Zero()}, {2, Vec3(0, 2, 0)}, {3, Vec3(2, 0, -1)}};
  const Vec3 dir = Vec3(1, 1, 1).normalized();
  std::vector<InertialBearingSample> recede;
  for (int k = 0; k <= 200; ++k) {
    InertialBearingSample s;
    s.t = 0.05 * k;
    const Vec3 c = dir * (1.0 + s.t);
    for (const auto& lm : rlms) s.u[lm.id] = (lm.position - c).normalized();
    recede.push_back(std::move(s));
  }
  const MonoMotionResult mono_recede = check_mono_motion(recede, {1, 2, 3}, 0.1, 2.0);

  const bool ok = pass_r.pass && pass_r.lambda_min >= kMargin && !fail_r.pass &&
                  fail_r.lambda_min / fail_r.lambda_max < kRatio && mono_eight.pass &&
                  !mono_recede.pass && !mono_recede.per_landmark.at(1);
  std::ostringstream os;
  os << "witness triple lambda_min=" << pass_r.lambda_min << " collinear ratio="
     << fail_r.lambda_min / fail_r.lambda_max << " mono eight=" << (mono_eight.pass ? "pass" : "fail")
     << " mono radial=" << (mono_recede.pass ? "pass" : "fail");
  return {ok, os.str()};
}

Outcome criterion8() {
  constexpr double kPos = 0.15, kAtt = 0.08;
  RunConfig cfg;
  cfg.observer = ObserverKind::Hybrid;
  cfg.mode = MeasurementMode::Stereo;
  cfg.duration = 30.0;
  cfg.seed = 8;
  cfg.gains.tuning = TuningMode::Adaptive;
  cfg.gains.noise.reg = 0.002;
  cfg.sim.imu_rate = 200.0;
  cfg.sim.vision_rate = 20.0;
  cfg.sim.bearing_noise = 0.01;
  cfg.sim.gyro_noise = std::sqrt(cfg.gains.noise.cov_omega(0, 0));
  cfg.sim.accel_noise = std::sqrt(cfg.gains.noise.cov_a(0, 0));
  cfg.finalize();
  cfg.validate();
  const Dataset ds = simulate(cfg);
  const EstimateResult res = estimate(cfg, ds);
  int violations = 0;
  for (const JumpRecord& j : res.jumps) {
    if (j.lambda_max_after > j.lambda_max_before) ++violations;
  }
  const TraceRecord& last = res.trace.back();
  std::ostringstream os;
  os << "t=" << last.t << " pos=" << last.pos_err << " att=" << last.att_err << " jumps="
     << res.jumps.size() << " contraction violations=" << violations;
  return {last.pos_err < kPos && last.att_err < kAtt && violations == 0 && !res.jumps.empty(),
          os.str()};
}

Outcome criterion9() {
  constexpr double kFallbackPos = 0.3, kRatio = 5.0;
  constexpr double kEnd = 20.0, kLoss = kEnd / 2.0;
  const EightTrajectory traj(kEnd);
  const auto lms = scenario::landmarks();

  TrajectoryInputs stereo_src(traj, lms, default_stereo_rig(), {}, CameraLoss{2, kLoss});
  const ObserverModel stereo_m = scenario::model(MeasurementMode::Stereo, lms);
  double worst_after = 0.0, stereo_end = 0.0;
  scenario::run(traj, stereo_src, stereo_m, scenario::initial_state(), kEnd, [&](const scenario::Sample& s) {
    if (s.t >= kLoss) worst_after = std::max(worst_after, s.pos);
    stereo_end = s.pos;
  });

  TrajectoryInputs pos_src(traj, lms, default_stereo_rig());
  pos_src.set_position_cutoff(kLoss);
  const ObserverModel pos_m = scenario::model(MeasurementMode::Position3d, lms);
  double pos_end = 0.0;
  scenario::run(traj, pos_src, pos_m, scenario::initial_state(), kEnd,
                [&](const scenario::Sample& s) { pos_end = s.pos; });

  std::ostringstream os;
  os << "stereo->mono max pos after loss=" << worst_after << " end=" << stereo_end
     << "; position3d without triangulation end=" << pos_end << " ratio=" << pos_end / stereo_end;
  return {worst_after < kFallbackPos && pos_end > kRatio * stereo_end, os.str()};
}

Outcome criterion10() {
  constexpr double kAtt = 0.05, kEnd = 30.0, kPerturb = 1e-3;
  // Runs continue past kEnd only to report when each one settles; the verdict uses t = kEnd.
  constexpr double kTrace = 60.0;
  const EightTrajectory traj(kTrace);
  const auto lms = scenario::landmarks();
  const TrajectoryInputs src(traj, lms, default_stereo_rig());
  const ObserverModel m = scenario::model(MeasurementMode::Stereo, lms);
  // M = diag(rho), so its eigenvectors are the coordinate axes.
  const Eigen::SelfAdjointEigenSolver<Mat3> es(Mat3(m.gains.rho.asDiagonal()));
  std::mt19937_64 rng(10);
  bool ok = true;
  std::ostringstream os;
  for (int i = 0; i < 3; ++i) {
    const Vec3 v = es.eigenvectors().col(i);
    const Rotation r_tilde = Rotation::from_matrix(
        exp_so3(kPi * v).matrix() * exp_so3(kPerturb * oracle::random_unit(rng)).matrix());
    ObserverState init = scenario::initial_state();
    init.R_hat = Rotation::from_matrix(r_tilde.matrix().transpose() * traj.state(0.0).R.matrix());
    double att_end = 1.0, settled = -1.0;
    scenario::run(traj, src, m, init, kTrace, [&](const scenario::Sample& s) {
      if (std::abs(s.t - kEnd) < 1e-9) att_end = s.att;
      if (s.att < kAtt && settled < 0.0) settled = s.t;
      if (s.att >= kAtt) settled = -1.0;
    });
    ok = ok && att_end < kAtt;
    os << "v" << i + 1 << " |R~|_I(30)=" << att_end << " below " << kAtt << " from t="
       << (settled < 0.0 ? std::string("never") : fmt("%.2f", settled)) << "; ";
  }
  return {ok, os.str()};
}

}  // namespace

int main() {
  std::vector<ModeRun> runs;
  report(1, "continuous observer reproduction", [&] {
    runs = continuous_runs();
    return criterion1(runs);
  });
  report(2, "output linearity", criterion2);
  report(3, "exponential decay and L_P monotonicity", [&] {
    if (runs.empty()) return Outcome{false, "criterion 1 runs unavailable"};
    return criterion3(runs);
  });
  report(4, "nilpotency and transition factorization", criterion4);
  report(5, "attitude identities", criterion5);
  report(6, "static degeneracy classification", criterion6);
  report(7, "Gramian and motion verdicts", criterion7);
  report(8, "hybrid observer with noise", criterion8);
  report(9, "camera loss robustness", criterion9);
  report(10, "escape from undesired equilibria", criterion10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
