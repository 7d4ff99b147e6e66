#include "vinobs/tuning.hpp"

namespace vinobs {

Mat15x6 noise_input_matrix(const Mat3& R_hat, const Vec3& p_hat, const Vec3& v_hat,
                           const std::array<Vec3, 3>& e_hat) {
  const Mat3 rt = R_hat.transpose();
  Mat15x6 g = Mat15x6::Zero();
  g.block<3, 3>(0, 0) = -skew(rt * p_hat);
  for (int i = 0; i < 3; ++i) {
    g.block<3, 3>(3 + 3 * i, 0) = -skew(rt * e_hat[static_cast<std::size_t>(i)]);
  }
  g.block<3, 3>(12, 0) = -skew(rt * v_hat);
  g.block<3, 3>(12, 3) = Mat3::Identity();
  return g;
}

Mat15 tune_v(const Mat3& R_hat, const Vec3& p_hat, const Vec3& v_hat,
             const std::array<Vec3, 3>& e_hat, const NoiseCovariances& ncov) {
  const Mat15x6 g = noise_input_matrix(R_hat, p_hat, v_hat, e_hat);
  Eigen::Matrix<double, 6, 6> cov = Eigen::Matrix<double, 6, 6>::Zero();
  cov.block<3, 3>(0, 0) = ncov.cov_omega;
  cov.block<3, 3>(3, 3) = ncov.cov_a;
  Mat15 v = g * cov * g.transpose();
  v.diagonal().array() += ncov.reg;
  return 0.5 * (v + v.transpose());
}

Eigen::MatrixXd tune_qinv(const Innovation& inn, const NoiseCovariances& ncov) {
  const auto n = static_cast<Eigen::Index>(inn.blocks());
  Eigen::MatrixXd qinv = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (inn.kinds[k] == BlockKind::Position) {
      qinv.block<3, 3>(3 * i, 3 * i) = ncov.cov_y_position;
    } else {
      const Mat3 m = inn.ranges[k] * inn.projectors[k];
      qinv.block<3, 3>(3 * i, 3 * i) = m * ncov.cov_y * m.transpose();
    }
  }
  qinv.diagonal().array() += ncov.reg;
  return 0.5 * (qinv + qinv.transpose());
}

TunedNoise tune_vq(const ObserverState& est, const NoiseCovariances& ncov, const Innovation& inn) {
  return {tune_v(est.R_hat.matrix(), est.p_hat, est.v_hat, est.e_hat, ncov), tune_qinv(inn, ncov)};
}

}  // namespace vinobs
