#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "vinobs/integrator.hpp"

namespace vinobs {

/// A P + P A^T - P C^T Q C P + V, symmetrized.
Mat15 riccati_rhs(const Mat15& P, const Mat15& A, const Eigen::MatrixXd& C,
                  const Eigen::MatrixXd& Q, const Mat15& V);

/// Gain K = P C^T Q of the continuous observer, rows ordered (K_p, K_1, K_2, K_3, K_v).
Eigen::MatrixXd continuous_gain(const Mat15& P, const Eigen::MatrixXd& C, const Eigen::MatrixXd& Q);

/// One step of the continuous observer with inputs queried from src at every stage.
ObserverState step(const ObserverState& est, const InputSource& src, const ObserverModel& model,
                   double dt, const IntegratorOptions& opts = {}, StepStats* stats = nullptr);

/// One step with the IMU sample and measurement set held constant over dt.
ObserverState step(const ObserverState& est, const ImuSample& imu,
                   const std::optional<MeasurementSet>& meas, const ObserverModel& model,
                   double dt);

using StepCallback = std::function<void(const ObserverState&)>;

/// Steps from init.t to t_end on a uniform grid of size dt (the last step may be
/// shorter). on_step sees init and every subsequent state.
ObserverState run_continuous(const ObserverState& init, const InputSource& src,
                             const ObserverModel& model, double t_end, double dt,
                             const StepCallback& on_step = {}, const IntegratorOptions& opts = {});

}  // namespace vinobs
