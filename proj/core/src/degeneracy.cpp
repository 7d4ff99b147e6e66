#include "vinobs/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/SVD>

#include "vinobs/errors.hpp"
#include "vinobs/innovation.hpp"

namespace vinobs {

namespace {

struct Flags {
  bool b = false;
  bool c = false;
  bool d = false;
  std::array<int, 3> wb{}, wc{}, wd{};
};

}  // namespace

OPrime build_O_prime(const LandmarkMap& lms, const Vec3& p_prime, const Vec3& g, double rank_rel) {
  const std::vector<Landmark> v = lms.to_vector();
  const auto n = static_cast<Eigen::Index>(v.size());
  double scale = std::max(1.0, p_prime.norm());
  for (const auto& lm : v) scale = std::max(scale, lm.position.norm());

  OPrime out;
  out.matrix = Eigen::MatrixXd::Zero(3 * n + 6, 15 + n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3& p = v[static_cast<std::size_t>(i)].position;
    const Vec3 rel = p - p_prime;
    if (rel.norm() <= 1e-9 * scale) {
      std::ostringstream os;
      os << "camera position coincides with landmark " << v[static_cast<std::size_t>(i)].id;
      throw Error(ErrorCode::CameraOnLandmark, os.str());
    }
    out.matrix.block<3, 15>(3 * i, 0) = c_block(Mat3::Identity(), p);
    out.matrix.block<3, 1>(3 * i, 15 + i) = rel;
  }
  out.matrix.block<3, 3>(3 * n, 12) = Mat3::Identity();
  for (int k = 0; k < 3; ++k) out.matrix.block<3, 3>(3 * n + 3, 3 + 3 * k) = g[k] * Mat3::Identity();

  out.singular_values = Eigen::JacobiSVD<Eigen::MatrixXd>(out.matrix).singularValues();
  const double smax = out.singular_values.size() ? out.singular_values.maxCoeff() : 0.0;
  out.rank = 0;
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    if (out.singular_values[k] > rank_rel * smax) ++out.rank;
  }
  return out;
}

const char* to_string(DegeneracyCase c) {
  switch (c) {
    case DegeneracyCase::Generic: return "generic";
    case DegeneracyCase::Coplanar: return "coplanar(a)";
    case DegeneracyCase::GravityPlane: return "gravity-plane(b)";
    case DegeneracyCase::CameraAligned: return "camera-aligned(c)";
    case DegeneracyCase::Mixed: return "mixed(d)";
    case DegeneracyCase::Unclassified: return "unclassified";
  }
  return "?";
}

DegeneracyVerdict classify_static_degeneracy(const LandmarkMap& lms, const Vec3& p_prime,
                                             const Vec3& g, const GeometryTolerances& tol) {
  const std::vector<Landmark> v = lms.to_vector();
  const std::size_t n = v.size();
  if (n < 5) {
    throw Error(ErrorCode::TooFewLandmarks,
                "static degeneracy needs at least 5 landmarks, got " + std::to_string(n));
  }
  const OPrime op = build_O_prime(lms, p_prime, g, tol.rank_rel);

  double scale = (p_prime - v[0].position).norm();
  for (const auto& a : v) {
    for (const auto& b : v) scale = std::max(scale, (a.position - b.position).norm());
    scale = std::max(scale, (a.position - p_prime).norm());
  }
  const double eps = tol.dist_rel * std::max(scale, 1.0);

  DegeneracyVerdict out;
  out.rank_O_prime = op.rank;
  out.full_rank_required = static_cast<int>(15 + n);

  // (a): plane of the widest triple.
  double best_area = 0.0;
  Vec3 normal = Vec3::Zero();
  Vec3 anchor = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const Vec3 c = (v[j].position - v[i].position).cross(v[k].position - v[i].position);
        if (0.5 * c.norm() > best_area) {
          best_area = 0.5 * c.norm();
          normal = c.normalized();
          anchor = v[i].position;
        }
      }
    }
  }
  if (best_area <= tol.eps_area) {
    throw Error(ErrorCode::ValidationError, "static degeneracy: all landmarks are aligned");
  }
  bool coplanar = true;
  for (const auto& lm : v) coplanar = coplanar && std::abs(normal.dot(lm.position - anchor)) <= eps;

  Flags f;
  if (!coplanar) {
    const Vec3 gu = g.normalized();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const Vec3 c = (v[j].position - v[i].position).cross(v[k].position - v[i].position);
          if (0.5 * c.norm() <= tol.eps_area) continue;
          const std::array<std::size_t, 3> tri{i, j, k};
          const std::array<int, 3> ids{v[i].id, v[j].id, v[k].id};
          std::vector<std::size_t> rest;
          for (std::size_t r = 0; r < n; ++r) {
            if (r != i && r != j && r != k) rest.push_back(r);
          }
          auto on_line = [&](std::size_t r, std::size_t w) {
            const Vec3 u = (p_prime - v[w].position).normalized();
            return (v[r].position - v[w].position).cross(u).norm() <= eps;
          };
          for (std::size_t w : tri) {
            bool all = true;
            for (std::size_t r : rest) all = all && on_line(r, w);
            if (all && !f.c) {
              f.c = true;
              f.wc = ids;
            }
          }
          for (int third = 0; third < 3; ++third) {
            const std::size_t a = tri[static_cast<std::size_t>((third + 1) % 3)];
            const std::size_t b = tri[static_cast<std::size_t>((third + 2) % 3)];
            const std::size_t c3 = tri[static_cast<std::size_t>(third)];
            const Vec3 ab = v[b].position - v[a].position;
            Vec3 m = ab.cross(gu);
            if (m.norm() <= 1e-9 * ab.norm()) continue;
            m.normalize();
            auto in_plane = [&](std::size_t r) {
              return std::abs(m.dot(v[r].position - v[a].position)) <= eps;
            };
            bool all_plane = true;
            bool mixed = true;
            int n_plane = 0;
            int n_line = 0;
            for (std::size_t r : rest) {
              const bool ip = in_plane(r);
              const bool ol = on_line(r, c3);
              all_plane = all_plane && ip;
              mixed = mixed && (ip || ol);
              if (ip) ++n_plane;
              else if (ol) ++n_line;
            }
            if (all_plane && !f.b) {
              f.b = true;
              f.wb = ids;
            }
            if (mixed && n_plane > 0 && n_line > 0 && !f.d) {
              f.d = true;
              f.wd = ids;
            }
          }
        }
      }
    }
  }

  const bool full = op.rank == out.full_rank_required;
  if (coplanar) {
    out.case_label = DegeneracyCase::Coplanar;
  } else if (f.b) {
    out.case_label = DegeneracyCase::GravityPlane;
    out.witness = f.wb;
  } else if (f.c) {
    out.case_label = DegeneracyCase::CameraAligned;
    out.witness = f.wc;
  } else if (f.d) {
    out.case_label = DegeneracyCase::Mixed;
    out.witness = f.wd;
  } else {
    out.case_label = full ? DegeneracyCase::Generic : DegeneracyCase::Unclassified;
  }
  out.rank_consistent = (out.case_label == DegeneracyCase::Generic) == full;
  return out;
}

}  // namespace vinobs
