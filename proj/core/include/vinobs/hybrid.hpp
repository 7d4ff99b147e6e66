#pragma once

#include <limits>
#include <vector>

#include <Eigen/Core>

#include "vinobs/integrator.hpp"
#include "vinobs/tuning.hpp"

namespace vinobs {

/// Jump instants t_k with dwell bounds T_m <= t_{k+1} - t_k <= T_M and t_1 - t_0 < T_M.
struct MeasurementSchedule {
  std::vector<double> jump_times;
  double T_m = 0.0;
  double T_M = std::numeric_limits<double>::infinity();

  /// Throws Error(ScheduleViolation) naming the first offending gap.
  void validate(double t0 = 0.0) const;
};

/// Flow between jumps: observer ODEs without measurement terms and
/// P' = A P + P A^T + V. Inputs are queried from src at every stage.
ObserverState flow(const ObserverState& est, const InputSource& src, const ObserverModel& model,
                   double dt, const IntegratorOptions& opts = {});

/// Flow with the IMU sample held constant over dt.
ObserverState flow(const ObserverState& est, const ImuSample& imu, const ObserverModel& model,
                   double dt);

/// K = P C^T (C P C^T + Q^-1)^-1. Throws Error(SingularInnovation) when
/// C P C^T + Q^-1 has condition number above 1e12.
Eigen::MatrixXd hybrid_gain(const Mat15& P, const Eigen::MatrixXd& C, const Eigen::MatrixXd& Qinv);

/// Discrete update: R_hat unchanged, (p, e_i, v) += R_hat K_(.) sigma_y, P+ = (I - K C) P symmetrized.
ObserverState jump(const ObserverState& est, const Innovation& inn, const Eigen::MatrixXd& Qinv);

/// Q^-1 used at a jump: (1 / q_scale) I for constant tuning, tune_qinv otherwise.
Eigen::MatrixXd jump_qinv(const Innovation& inn, const GainConfig& gains);

struct JumpRecord {
  double t = 0.0;
  std::size_t blocks = 0;
  double lambda_max_before = 0.0;
  double lambda_max_after = 0.0;
};

struct HybridOptions {
  IntegratorOptions integrator;
  /// Check MeasurementSchedule bounds before running.
  bool validate_schedule = true;
};

struct HybridRun {
  std::vector<ObserverState> trace;  // one state per IMU timestamp
  std::vector<JumpRecord> jumps;
};

/// Flow between IMU timestamps with linearly interpolated IMU,
/// then jump with every vision set snapped to the IMU sample nearest to it.
/// vision must be sorted by t. Throws Error(ScheduleViolation).
HybridRun run_hybrid(const std::vector<ImuSample>& imu, const std::vector<MeasurementSet>& vision,
                     const MeasurementSchedule& schedule, const ObserverModel& model,
                     const ObserverState& init, const HybridOptions& opts = {});

/// Schedule with the vision set timestamps as jump times and the given bounds.
MeasurementSchedule schedule_from(const std::vector<MeasurementSet>& vision, double T_m,
                                  double T_M);

}  // namespace vinobs
