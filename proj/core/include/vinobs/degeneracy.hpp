#pragma once

#include <array>
#include <string>

#include <Eigen/Core>

#include "vinobs/observability.hpp"
#include "vinobs/types.hpp"

namespace vinobs {

struct OPrime {
  Eigen::MatrixXd matrix;  // (3N + 6) x (15 + N)
  Eigen::VectorXd singular_values;
  int rank = 0;
};

/// [C_bar, M; N1, 0; N2, 0] for a motionless camera at p_prime, with
/// M = blkdiag(p_i - p_prime), N1 = [0, 0, 0, 0, I], N2 = [0, g1 I, g2 I, g3 I, 0].
/// Rank counts singular values above rank_rel * sigma_max.
/// Throws Error(CameraOnLandmark) if p_prime coincides with a landmark.
OPrime build_O_prime(const LandmarkMap& lms, const Vec3& p_prime, const Vec3& g,
                     double rank_rel = 1e-8);

enum class DegeneracyCase { Generic, Coplanar, GravityPlane, CameraAligned, Mixed, Unclassified };

/// "generic", "coplanar(a)", "gravity-plane(b)", "camera-aligned(c)", "mixed(d)", "unclassified".
const char* to_string(DegeneracyCase c);

struct DegeneracyVerdict {
  DegeneracyCase case_label = DegeneracyCase::Generic;
  int rank_O_prime = 0;
  int full_rank_required = 0;
  std::array<int, 3> witness{0, 0, 0};  // triple behind (b)-(d)
  bool rank_consistent = true;          // predicate and rank agree
};

/// Tests the static-camera degeneracy predicates in the order (a), (b), (c), (d)
/// with distances relative to the scene size, then cross-checks rank(O').
/// Rank-deficient configurations that match no predicate are Unclassified.
/// Throws Error(TooFewLandmarks) for N < 5 and Error(ValidationError) when
/// all landmarks are aligned.
DegeneracyVerdict classify_static_degeneracy(const LandmarkMap& lms, const Vec3& p_prime,
                                             const Vec3& g, const GeometryTolerances& tol = {});

}  // namespace vinobs
