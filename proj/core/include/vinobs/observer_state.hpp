#pragma once

#include <array>

#include "vinobs/types.hpp"

namespace vinobs {

/// Estimator state on SO(3) x R^15 plus the 15x15 Riccati matrix.
///
/// e_hat are the auxiliary vectors whose body-frame images R_hat^T e_hat[i]
/// track R^T e_i; together with g they give the gravity estimate g_hat.
struct ObserverState {
  double t = 0.0;
  Rotation R_hat;
  Vec3 p_hat = Vec3::Zero();
  Vec3 v_hat = Vec3::Zero();
  std::array<Vec3, 3> e_hat{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  Mat15 P = Mat15::Identity();

  Vec3 g_hat(const Vec3& g) const {
    return g.x() * e_hat[0] + g.y() * e_hat[1] + g.z() * e_hat[2];
  }
};

/// x_tilde = (p_tilde, e_tilde_1, e_tilde_2, e_tilde_3, v_tilde), each a body-frame 3-vector.
struct TranslationalError {
  Vec15 x = Vec15::Zero();

  Vec3 p() const { return x.segment<3>(0); }
  Vec3 e(int i) const { return x.segment<3>(3 + 3 * i); }
  Vec3 v() const { return x.segment<3>(12); }
};

struct ErrorState {
  Rotation R_tilde;  // R R_hat^T
  TranslationalError x_tilde;
};

/// R_tilde = R R_hat^T, p_tilde = R^T p - R_hat^T p_hat, e_tilde_i = R^T e_i - R_hat^T e_hat_i,
/// v_tilde = R^T v - R_hat^T v_hat.
ErrorState error_state(const RigidBodyState& truth, const ObserverState& est);

/// Noise model used to derive V and Q^-1 from the current estimate.
struct NoiseCovariances {
  Mat3 cov_omega = 0.0024 * Mat3::Identity();  // (rad/s)^2
  Mat3 cov_a = 0.028 * Mat3::Identity();       // (m/s^2)^2
  Mat3 cov_y = 0.0005 * Mat3::Identity();      // per-landmark block of Cov(n_y), bearings
  Mat3 cov_y_position = 0.06 * Mat3::Identity();  // per-landmark block, 3D positions (m^2)
  double reg = 0.002;
};

enum class TuningMode { Constant, Adaptive };

struct GainConfig {
  double k_R = 1.0;
  Vec3 rho{0.5, 0.3, 0.2};
  TuningMode tuning = TuningMode::Constant;
  double q_scale = 1e3;                 // constant Q = q_scale * I_{3N}
  Mat15 V = 1e-4 * Mat15::Identity();   // constant V
  NoiseCovariances noise;               // adaptive V and Q^-1

  /// Throws Error(ConfigError) unless k_R > 0, rho_i > 0 and pairwise distinct,
  /// q_scale > 0 and V symmetric positive definite.
  void validate() const;

  Mat3 M() const { return rho.asDiagonal(); }
};

}  // namespace vinobs
