#pragma once

#include <array>

#include <Eigen/Core>

#include "vinobs/innovation.hpp"
#include "vinobs/observer_state.hpp"

namespace vinobs {

using Mat15x6 = Eigen::Matrix<double, 15, 6>;

/// G_t mapping (n_omega, n_a) into the translational error dynamics:
/// first column block -[(R^T p)^x; (R^T e_1)^x; (R^T e_2)^x; (R^T e_3)^x; (R^T v)^x],
/// second column block [0; 0; 0; 0; I].
Mat15x6 noise_input_matrix(const Mat3& R_hat, const Vec3& p_hat, const Vec3& v_hat,
                           const std::array<Vec3, 3>& e_hat);

/// V = G_t Cov(n_x) G_t^T + reg I with Cov(n_x) = blkdiag(cov_omega, cov_a).
Mat15 tune_v(const Mat3& R_hat, const Vec3& p_hat, const Vec3& v_hat,
             const std::array<Vec3, 3>& e_hat, const NoiseCovariances& ncov);

/// Q^-1 = M_t Cov(n_y) M_t^T + reg I, M_t = blkdiag(||p_hat - p_hat_i|| Pi_i) for
/// bearing blocks and I for position blocks. Cov(n_y) has blocks cov_y (bearings)
/// or cov_y_position (positions).
Eigen::MatrixXd tune_qinv(const Innovation& inn, const NoiseCovariances& ncov);

struct TunedNoise {
  Mat15 V;
  Eigen::MatrixXd Qinv;
};

TunedNoise tune_vq(const ObserverState& est, const NoiseCovariances& ncov, const Innovation& inn);

}  // namespace vinobs
