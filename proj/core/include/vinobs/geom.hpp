#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

namespace vinobs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Element of SO(3). Construction validates orthonormality and det = +1;
/// use Rotation::project to map an arbitrary matrix onto the group.
class Rotation {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  Rotation() : m_(Mat3::Identity()) {}

  /// Throws Error(NotRotation) if ||m m^T - I||_F or |det(m) - 1| exceeds tol.
  static Rotation from_matrix(const Mat3& m, double tol = kDefaultTolerance);

  /// Closest rotation in Frobenius norm (polar decomposition via SVD).
  static Rotation project(const Mat3& m);

  static Rotation identity() { return Rotation(); }

  const Mat3& matrix() const { return m_; }
  Rotation transpose() const { return Rotation(m_.transpose(), Unchecked{}); }
  Rotation inverse() const { return transpose(); }

  Rotation operator*(const Rotation& other) const {
    return Rotation(m_ * other.m_, Unchecked{});
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  double orthonormality_error() const;

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;
};

/// Vector of unit Euclidean norm.
class UnitVector3 {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  /// Throws Error(NotUnit) if | ||v|| - 1 | > tol.
  static UnitVector3 from(const Vec3& v, double tol = kDefaultTolerance);
  /// Throws Error(NotUnit) for (near) zero input.
  static UnitVector3 normalize(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }

 private:
  explicit UnitVector3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

Mat3 skew(const Vec3& v);

/// Inverse of skew. Throws Error(NotAntisymmetric) when ||M + M^T||_F > tol.
Vec3 vee(const Mat3& m, double tol = 1e-9);

/// vee of the antisymmetric part: 0.5 [a32 - a23, a13 - a31, a21 - a12].
Vec3 psi_a(const Mat3& a);

/// Orthogonal projector I - x x^T onto the plane normal to x.
/// Throws Error(NotUnit) if ||x|| deviates from 1 by more than tol.
Mat3 pi_proj(const Vec3& x, double tol = 1e-6);
inline Mat3 pi_proj(const UnitVector3& x) { return pi_proj(x.vec()); }

/// Rodrigues exponential of v^x.
Rotation exp_so3(const Vec3& v);

/// Rotation angle (in [0, pi]) times unit axis. At angle pi the axis sign is arbitrary.
Vec3 log_so3(const Rotation& r);

/// |R|_I = sqrt(tr(I - R) / 4), in [0, 1].
double dist_I(const Rotation& r);

/// Auxiliary quantities of the modified trace potential tr((I - R) M).
struct Lemma4Quantities {
  Mat3 m_bar;    // (tr(M) I - M) / 2
  Mat3 m_under;  // tr(Mbar^2) I - 2 Mbar^2
  Mat3 e;        // (tr(M R) I - R^T M) / 2
  double alpha;  // 1 - |R|_I^2 cos^2(angle(u, Mbar u)); 1 at R = I
};

Lemma4Quantities lemma4_quantities(const Mat3& m, const Rotation& r);

}  // namespace vinobs
