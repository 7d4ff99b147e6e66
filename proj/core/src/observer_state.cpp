#include "vinobs/observer_state.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "vinobs/errors.hpp"

namespace vinobs {

ErrorState error_state(const RigidBodyState& truth, const ObserverState& est) {
  const Mat3 rt = truth.R.matrix().transpose();
  const Mat3 rht = est.R_hat.matrix().transpose();
  ErrorState out;
  out.R_tilde = truth.R * est.R_hat.transpose();
  out.x_tilde.x.segment<3>(0) = rt * truth.p - rht * est.p_hat;
  for (int i = 0; i < 3; ++i) {
    out.x_tilde.x.segment<3>(3 + 3 * i) = rt.col(i) - rht * est.e_hat[static_cast<std::size_t>(i)];
  }
  out.x_tilde.x.segment<3>(12) = rt * truth.v - rht * est.v_hat;
  return out;
}

void GainConfig::validate() const {
  std::ostringstream os;
  if (!(k_R > 0.0)) os << "gains.k_R must be > 0; ";
  for (int i = 0; i < 3; ++i) {
    if (!(rho[i] > 0.0)) os << "gains.rho[" << i << "] must be > 0; ";
  }
  if (rho[0] == rho[1] || rho[0] == rho[2] || rho[1] == rho[2]) {
    os << "gains.rho entries must be pairwise distinct; ";
  }
  if (tuning == TuningMode::Constant) {
    if (!(q_scale > 0.0)) os << "gains.q must be > 0; ";
    if ((V - V.transpose()).norm() > 1e-12 ||
        Eigen::SelfAdjointEigenSolver<Mat15>(V, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() <=
            0.0) {
      os << "gains.v must be symmetric positive definite; ";
    }
  } else if (!(noise.reg > 0.0)) {
    os << "noise.reg must be > 0; ";
  }
  const std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorCode::ConfigError, msg.substr(0, msg.size() - 2));
}

}  // namespace vinobs
