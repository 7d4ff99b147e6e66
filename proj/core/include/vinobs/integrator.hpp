#pragma once

#include <optional>
#include <vector>

#include "vinobs/innovation.hpp"
#include "vinobs/observer_state.hpp"

namespace vinobs {

/// Inputs of the observer ODEs, queried at arbitrary (stage) times.
class InputSource {
 public:
  virtual ~InputSource() = default;
  virtual ImuSample imu(double t) const = 0;
  /// Vision data valid at t, or nullopt when no correction should be applied.
  virtual std::optional<MeasurementSet> measurement(double t) const = 0;
};

/// Zero-order hold of one IMU sample and optional measurement set.
class ConstantInputs final : public InputSource {
 public:
  explicit ConstantInputs(const ImuSample& imu, std::optional<MeasurementSet> meas = std::nullopt)
      : imu_(imu), meas_(std::move(meas)) {}

  ImuSample imu(double t) const override {
    ImuSample s = imu_;
    s.t = t;
    return s;
  }
  std::optional<MeasurementSet> measurement(double) const override { return meas_; }

 private:
  ImuSample imu_;
  std::optional<MeasurementSet> meas_;
};

/// Linear interpolation of a sorted IMU stream; clamps outside its span.
class ImuStream final : public InputSource {
 public:
  explicit ImuStream(std::vector<ImuSample> samples);

  ImuSample imu(double t) const override;
  std::optional<MeasurementSet> measurement(double) const override { return std::nullopt; }

  const std::vector<ImuSample>& samples() const { return samples_; }

 private:
  std::vector<ImuSample> samples_;
};

/// Everything the right-hand side needs besides the state and inputs.
struct ObserverModel {
  GainConfig gains;
  SensorSetup sensors;
  Vec3 gravity = kDefaultGravity;
};

struct IntegratorOptions {
  /// Each RK4 substep h satisfies h * rho <= stiffness_bound, where rho bounds
  /// the fastest rate of the current right-hand side.
  double stiffness_bound = 0.5;
  int max_substeps = 100000;
};

struct StepStats {
  int substeps = 0;
  std::size_t blocks = 0;  // innovation blocks at the first stage
};

/// Integrates the observer ODEs from est.t to est.t + dt with RK4 (adaptive
/// substeps). With correct = false the measurement terms are dropped and the
/// Riccati equation reduces to P' = A P + P A^T + V.
/// After every substep R_hat is re-projected onto SO(3) and P symmetrized.
/// Throws Error(NonFiniteState) on NaN/Inf or when max_substeps is exceeded.
ObserverState integrate(const ObserverState& est, const InputSource& src,
                        const ObserverModel& model, double dt, bool correct,
                        const IntegratorOptions& opts = {}, StepStats* stats = nullptr);

/// Throws Error(NonFiniteState) if any component of est is NaN/Inf.
void check_finite(const ObserverState& est);

}  // namespace vinobs
