#include "vinobs/continuous.hpp"

#include <algorithm>
#include <cmath>

#include "vinobs/errors.hpp"

namespace vinobs {

Mat15 riccati_rhs(const Mat15& P, const Mat15& A, const Eigen::MatrixXd& C,
                  const Eigen::MatrixXd& Q, const Mat15& V) {
  Mat15 out = A * P + P * A.transpose() + V;
  if (C.rows() > 0) {
    const Eigen::MatrixXd pct = P * C.transpose();
    out -= pct * Q * pct.transpose();
  }
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd continuous_gain(const Mat15& P, const Eigen::MatrixXd& C,
                                const Eigen::MatrixXd& Q) {
  return P * C.transpose() * Q;
}

ObserverState step(const ObserverState& est, const InputSource& src, const ObserverModel& model,
                   double dt, const IntegratorOptions& opts, StepStats* stats) {
  return integrate(est, src, model, dt, true, opts, stats);
}

ObserverState step(const ObserverState& est, const ImuSample& imu,
                   const std::optional<MeasurementSet>& meas, const ObserverModel& model,
                   double dt) {
  const ConstantInputs src(imu, meas);
  return integrate(est, src, model, dt, true);
}

ObserverState run_continuous(const ObserverState& init, const InputSource& src,
                             const ObserverModel& model, double t_end, double dt,
                             const StepCallback& on_step, const IntegratorOptions& opts) {
  if (!(dt > 0.0)) throw Error(ErrorCode::ValidationError, "dt must be > 0");
  ObserverState est = init;
  if (on_step) on_step(est);
  const double t0 = init.t;
  for (long k = 1;; ++k) {
    const double t_next = std::min(t0 + static_cast<double>(k) * dt, t_end);
    if (t_next - est.t <= 1e-12) break;
    est = integrate(est, src, model, t_next - est.t, true, opts);
    est.t = t_next;
    if (on_step) on_step(est);
    if (t_next >= t_end) break;
  }
  return est;
}

}  // namespace vinobs
