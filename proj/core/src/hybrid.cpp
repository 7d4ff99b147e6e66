#include "vinobs/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "vinobs/errors.hpp"

namespace vinobs {

namespace {

double lambda_max(const Mat15& p) {
  return Eigen::SelfAdjointEigenSolver<Mat15>(p, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

}  // namespace

void MeasurementSchedule::validate(double t0) const {
  if (jump_times.empty()) return;
  std::ostringstream os;
  if (!(jump_times.front() - t0 < T_M)) {
    os << "schedule: first jump at t = " << jump_times.front() << " is not within T_M = " << T_M
       << " of the start";
    throw Error(ErrorCode::ScheduleViolation, os.str());
  }
  for (std::size_t k = 1; k < jump_times.size(); ++k) {
    const double gap = jump_times[k] - jump_times[k - 1];
    if (!(gap > 0.0) || gap < T_m - 1e-9 || gap > T_M + 1e-9) {
      os << "schedule: gap " << gap << " s between t = " << jump_times[k - 1] << " and t = "
         << jump_times[k] << " outside [" << T_m << ", " << T_M << "]";
      throw Error(ErrorCode::ScheduleViolation, os.str());
    }
  }
}

ObserverState flow(const ObserverState& est, const InputSource& src, const ObserverModel& model,
                   double dt, const IntegratorOptions& opts) {
  return integrate(est, src, model, dt, false, opts);
}

ObserverState flow(const ObserverState& est, const ImuSample& imu, const ObserverModel& model,
                   double dt) {
  const ConstantInputs src(imu);
  return integrate(est, src, model, dt, false);
}

Eigen::MatrixXd hybrid_gain(const Mat15& P, const Eigen::MatrixXd& C,
                            const Eigen::MatrixXd& Qinv) {
  const Eigen::MatrixXd pct = P * C.transpose();
  Eigen::MatrixXd s = C * pct + Qinv;
  s = 0.5 * (s + s.transpose());
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    std::ostringstream os;
    os << "C P C^T + Q^-1 is singular (eigenvalues in [" << lo << ", " << hi << "])";
    throw Error(ErrorCode::SingularInnovation, os.str());
  }
  return s.ldlt().solve(pct.transpose()).transpose();
}

Eigen::MatrixXd jump_qinv(const Innovation& inn, const GainConfig& gains) {
  if (gains.tuning == TuningMode::Adaptive) return tune_qinv(inn, gains.noise);
  const auto n = static_cast<Eigen::Index>(3 * inn.blocks());
  return Eigen::MatrixXd::Identity(n, n) / gains.q_scale;
}

ObserverState jump(const ObserverState& est, const Innovation& inn, const Eigen::MatrixXd& Qinv) {
  if (inn.empty()) return est;
  const Eigen::MatrixXd k = hybrid_gain(est.P, inn.C, Qinv);
  const Vec15 corr = k * inn.sigma_y;
  const Mat3& r = est.R_hat.matrix();
  ObserverState out = est;
  out.p_hat += r * corr.segment<3>(0);
  for (std::size_t i = 0; i < 3; ++i) {
    out.e_hat[i] += r * corr.segment<3>(3 + 3 * static_cast<Eigen::Index>(i));
  }
  out.v_hat += r * corr.segment<3>(12);
  const Mat15 p = (Mat15::Identity() - k * inn.C) * est.P;
  out.P = 0.5 * (p + p.transpose());
  check_finite(out);
  return out;
}

MeasurementSchedule schedule_from(const std::vector<MeasurementSet>& vision, double T_m,
                                  double T_M) {
  MeasurementSchedule s;
  s.T_m = T_m;
  s.T_M = T_M;
  s.jump_times.reserve(vision.size());
  for (const auto& m : vision) s.jump_times.push_back(m.t);
  return s;
}

HybridRun run_hybrid(const std::vector<ImuSample>& imu, const std::vector<MeasurementSet>& vision,
                     const MeasurementSchedule& schedule, const ObserverModel& model,
                     const ObserverState& init, const HybridOptions& opts) {
  if (imu.empty()) throw Error(ErrorCode::ValidationError, "imu: stream is empty");
  if (opts.validate_schedule) schedule.validate(imu.front().t);

  // Snap each vision set to the nearest IMU index.
  std::vector<std::vector<std::size_t>> at_index(imu.size());
  for (std::size_t j = 0; j < vision.size(); ++j) {
    const double t = vision[j].t;
    auto it = std::lower_bound(imu.begin(), imu.end(), t,
                               [](const ImuSample& s, double x) { return s.t < x; });
    std::size_t idx;
    if (it == imu.end()) {
      idx = imu.size() - 1;
    } else if (it == imu.begin()) {
      idx = 0;
    } else {
      const auto hi = static_cast<std::size_t>(it - imu.begin());
      idx = (t - imu[hi - 1].t <= imu[hi].t - t) ? hi - 1 : hi;
    }
    at_index[idx].push_back(j);
  }

  const ImuStream src(imu);
  HybridRun run;
  run.trace.reserve(imu.size());
  ObserverState est = init;
  est.t = imu.front().t;

  auto apply_jumps = [&](std::size_t idx) {
    for (std::size_t j : at_index[idx]) {
      const Innovation inn = compute_innovation(EstimateView::of(est), vision[j], model.sensors);
      if (inn.empty()) continue;
      JumpRecord rec;
      rec.t = est.t;
      rec.blocks = inn.blocks();
      rec.lambda_max_before = lambda_max(est.P);
      est = jump(est, inn, jump_qinv(inn, model.gains));
      rec.lambda_max_after = lambda_max(est.P);
      run.jumps.push_back(rec);
    }
  };

  apply_jumps(0);
  run.trace.push_back(est);
  for (std::size_t k = 1; k < imu.size(); ++k) {
    const double dt = imu[k].t - est.t;
    if (!(dt > 0.0)) {
      std::ostringstream os;
      os << "imu: timestamps not strictly increasing at t = " << imu[k].t;
      throw Error(ErrorCode::ValidationError, os.str());
    }
    est = flow(est, src, model, dt, opts.integrator);
    est.t = imu[k].t;
    apply_jumps(k);
    run.trace.push_back(est);
  }
  return run;
}

}  // namespace vinobs
