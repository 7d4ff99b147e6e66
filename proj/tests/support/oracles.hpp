#pragma once

// Reference computations used by the tests. They are written from the
// defining formulas and avoid the library's own helpers where practical.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vinobs/geom.hpp"
#include "vinobs/observer_state.hpp"
#include "vinobs/types.hpp"

namespace vinobs::oracle {

inline Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

// Uniform rotation from a normalized Gaussian quaternion.
inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline Eigen::Vector3d random_vector(std::mt19937_64& rng, double half_extent = 1.0) {
  std::uniform_real_distribution<double> u(-half_extent, half_extent);
  return {u(rng), u(rng), u(rng)};
}

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
}

// Truncated power series of exp(v^x).
inline Eigen::Matrix3d series_exp(const Eigen::Vector3d& v, int terms = 20) {
  const Eigen::Matrix3d x = cross_matrix(v);
  Eigen::Matrix3d sum = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  for (int k = 1; k < terms; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

// x_tilde = (R^T p - Rh^T ph, R^T e_i - Rh^T eh_i, R^T v - Rh^T vh).
inline Eigen::Matrix<double, 15, 1> translational_error(const Eigen::Matrix3d& R,
                                                        const Eigen::Vector3d& p,
                                                        const Eigen::Vector3d& v,
                                                        const ObserverState& est) {
  const Eigen::Matrix3d Rh = est.R_hat.matrix();
  Eigen::Matrix<double, 15, 1> x;
  x.segment<3>(0) = R.transpose() * p - Rh.transpose() * est.p_hat;
  for (int i = 0; i < 3; ++i) {
    x.segment<3>(3 + 3 * i) =
        R.transpose() * Eigen::Vector3d::Unit(i) - Rh.transpose() * est.e_hat[static_cast<std::size_t>(i)];
  }
  x.segment<3>(12) = R.transpose() * v - Rh.transpose() * est.v_hat;
  return x;
}

// Body-frame bearing of a landmark from a camera, straight from the model.
inline Eigen::Vector3d bearing(const Eigen::Matrix3d& R, const Eigen::Vector3d& p,
                               const Eigen::Vector3d& p_i, const Eigen::Matrix3d& R_c,
                               const Eigen::Vector3d& p_c) {
  const Eigen::Vector3d d = R.transpose() * (p_i - p) - p_c;
  return R_c.transpose() * d / d.norm();
}

// Least-squares slope of log(y) against t, negated (a decay rate).
inline double decay_rate(const std::vector<double>& t, const std::vector<double>& y) {
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  const double n = static_cast<double>(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double l = std::log(y[k]);
    st += t[k];
    sl += l;
    stt += t[k] * t[k];
    stl += t[k] * l;
  }
  return -(n * stl - st * sl) / (n * stt - st * st);
}

// Attitude about a fixed axis by the classical angle formula.
inline double rotation_angle(const Eigen::Matrix3d& R) {
  return std::acos(std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0));
}

}  // namespace vinobs::oracle
