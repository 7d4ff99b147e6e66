#include "vinobs/geom.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "vinobs/errors.hpp"

namespace vinobs {

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  Rotation r(m, Unchecked{});
  const double ortho = r.orthonormality_error();
  const double det = m.determinant();
  if (!(ortho <= tol) || !(std::abs(det - 1.0) <= tol)) {
    std::ostringstream os;
    os << "matrix is not a rotation (||RR^T - I||_F = " << ortho << ", det = " << det << ")";
    throw Error(ErrorCode::NotRotation, os.str());
  }
  return r;
}

Rotation Rotation::project(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  if ((u * v.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  return Rotation(u * d * v.transpose(), Unchecked{});
}

double Rotation::orthonormality_error() const {
  return (m_ * m_.transpose() - Mat3::Identity()).norm();
}

UnitVector3 UnitVector3::from(const Vec3& v, double tol) {
  const double n = v.norm();
  if (!(std::abs(n - 1.0) <= tol)) {
    std::ostringstream os;
    os << "vector norm " << n << " is not 1";
    throw Error(ErrorCode::NotUnit, os.str());
  }
  return UnitVector3(v);
}

UnitVector3 UnitVector3::normalize(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw Error(ErrorCode::NotUnit, "cannot normalize a zero or non-finite vector");
  }
  return UnitVector3(v / n);
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m, double tol) {
  const double asym = (m + m.transpose()).norm();
  if (!(asym <= tol)) {
    std::ostringstream os;
    os << "||M + M^T||_F = " << asym;
    throw Error(ErrorCode::NotAntisymmetric, os.str());
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Vec3 psi_a(const Mat3& a) {
  return 0.5 * Vec3(a(2, 1) - a(1, 2), a(0, 2) - a(2, 0), a(1, 0) - a(0, 1));
}

Mat3 pi_proj(const Vec3& x, double tol) {
  const double n = x.norm();
  if (!(std::abs(n - 1.0) <= tol)) {
    std::ostringstream os;
    os << "projector argument has norm " << n;
    throw Error(ErrorCode::NotUnit, os.str());
  }
  return Mat3::Identity() - x * x.transpose();
}

Rotation exp_so3(const Vec3& v) {
  const double theta = v.norm();
  const Mat3 k = skew(v);
  double a;  // sin(theta) / theta
  double b;  // (1 - cos(theta)) / theta^2
  if (theta < 1e-6) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Rotation::project(Mat3::Identity() + a * k + b * k * k);
}

Vec3 log_so3(const Rotation& r) {
  const Mat3& m = r.matrix();
  const double c = std::clamp((m.trace() - 1.0) / 2.0, -1.0, 1.0);
  const Vec3 w = psi_a(m);  // sin(theta) * axis
  const double theta = std::atan2(w.norm(), c);
  if (theta < 1e-6) return w;
  if (theta < 3.1) return w * (theta / std::sin(theta));
  // Near pi: sym(R) = cos(theta) I + (1 - cos(theta)) u u^T; pick its best-conditioned column.
  const Mat3 uut = (0.5 * (m + m.transpose()) - c * Mat3::Identity()) / (1.0 - c);
  int k = 0;
  uut.diagonal().maxCoeff(&k);
  Vec3 u = uut.col(k).normalized();
  if (u.dot(w) < 0.0) u = -u;
  return theta * u;
}

double dist_I(const Rotation& r) {
  const double t = std::clamp((Mat3::Identity() - r.matrix()).trace(), 0.0, 4.0);
  return std::sqrt(t / 4.0);
}

Lemma4Quantities lemma4_quantities(const Mat3& m, const Rotation& r) {
  Lemma4Quantities q;
  const Mat3 i3 = Mat3::Identity();
  q.m_bar = 0.5 * (m.trace() * i3 - m);
  const Mat3 mb2 = q.m_bar * q.m_bar;
  q.m_under = mb2.trace() * i3 - 2.0 * mb2;
  const Mat3& rm = r.matrix();
  q.e = 0.5 * ((m * rm).trace() * i3 - rm.transpose() * m);

  const Vec3 axis_angle = log_so3(r);
  const double theta = axis_angle.norm();
  if (theta < 1e-12) {
    q.alpha = 1.0;
    return q;
  }
  const Vec3 u = axis_angle / theta;
  const Vec3 mu = q.m_bar * u;
  const double mu_norm = mu.norm();
  const double cos_angle = mu_norm > 0.0 ? u.dot(mu) / mu_norm : 0.0;
  const double d = dist_I(r);
  q.alpha = 1.0 - d * d * cos_angle * cos_angle;
  return q;
}

}  // namespace vinobs
