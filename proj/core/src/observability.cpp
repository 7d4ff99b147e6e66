#include "vinobs/observability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "vinobs/errors.hpp"
#include "vinobs/innovation.hpp"

namespace vinobs {

namespace {

constexpr double kTimeEps = 1e-9;

Vec3 tangent(const OmegaPath& p, std::size_t k) {
  const std::size_t n = p.t.size();
  if (n < 2) return Vec3::Zero();
  if (k == 0) return (p.omega[1] - p.omega[0]) / (p.t[1] - p.t[0]);
  if (k == n - 1) return (p.omega[n - 1] - p.omega[n - 2]) / (p.t[n - 1] - p.t[n - 2]);
  return (p.omega[k + 1] - p.omega[k - 1]) / (p.t[k + 1] - p.t[k - 1]);
}

Mat15 rk4_step(const MatrixFunction& A, double t, double h, const Mat15& phi) {
  const Mat15 a1 = A(t);
  const Mat15 a2 = A(t + 0.5 * h);
  const Mat15 a4 = A(t + h);
  const Mat15 k1 = a1 * phi;
  const Mat15 k2 = a2 * (phi + 0.5 * h * k1);
  const Mat15 k3 = a2 * (phi + 0.5 * h * k2);
  const Mat15 k4 = a4 * (phi + h * k3);
  return phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double min_eig(const Eigen::MatrixXd& w) {
  const Eigen::MatrixXd s = 0.5 * (w + w.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

// Samples of c inside [t, t + delta].
std::pair<std::size_t, std::size_t> window_range(const OutputPath& c, double t, double delta) {
  if (c.t.size() != c.C.size()) {
    throw Error(ErrorCode::ValidationError, "output path: time and matrix counts differ");
  }
  const auto lo = std::lower_bound(c.t.begin(), c.t.end(), t - kTimeEps);
  const auto hi = std::upper_bound(c.t.begin(), c.t.end(), t + delta + kTimeEps);
  const auto a = static_cast<std::size_t>(lo - c.t.begin());
  const auto b = static_cast<std::size_t>(hi - c.t.begin());
  if (b < a + 2) {
    std::ostringstream os;
    os << "window [" << t << ", " << t + delta << "] holds fewer than two output samples";
    throw Error(ErrorCode::ValidationError, os.str());
  }
  return {a, b};
}

}  // namespace

Vec3 OmegaPath::at(double tau) const {
  if (t.empty()) throw Error(ErrorCode::ValidationError, "omega path is empty");
  if (tau <= t.front()) return omega.front();
  if (tau >= t.back()) return omega.back();
  const auto it = std::upper_bound(t.begin(), t.end(), tau);
  const auto k = static_cast<std::size_t>(it - t.begin()) - 1;
  const double h = t[k + 1] - t[k];
  const double s = (tau - t[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * omega[k] + h10 * h * tangent(*this, k) + h01 * omega[k + 1] +
         h11 * h * tangent(*this, k + 1);
}

MatrixFunction a_of(const OmegaPath& path, const Vec3& g) {
  return [&path, g](double tau) { return build_A(path.at(tau), g); };
}

Mat15 transition_matrix(const MatrixFunction& A, double t0, double t1, double max_step) {
  if (t1 < t0) throw Error(ErrorCode::ValidationError, "transition matrix needs t1 >= t0");
  if (!(max_step > 0.0)) throw Error(ErrorCode::ValidationError, "max_step must be > 0");
  Mat15 phi = Mat15::Identity();
  const double span = t1 - t0;
  if (span <= 0.0) return phi;
  const auto n = static_cast<long>(std::ceil(span / max_step - 1e-9));
  const double h = span / static_cast<double>(n);
  for (long k = 0; k < n; ++k) phi = rk4_step(A, t0 + static_cast<double>(k) * h, h, phi);
  return phi;
}

Mat15 transition_matrix(const OmegaPath& path, const Vec3& g, double t0, double t1) {
  if (t1 < t0) throw Error(ErrorCode::ValidationError, "transition matrix needs t1 >= t0");
  const MatrixFunction a = a_of(path, g);
  Mat15 phi = Mat15::Identity();
  double t = t0;
  auto it = std::upper_bound(path.t.begin(), path.t.end(), t0 + kTimeEps);
  while (t1 - t > kTimeEps) {
    double next = t1;
    if (it != path.t.end() && *it < t1 - kTimeEps) next = *it++;
    phi = rk4_step(a, t, next - t, phi);
    t = next;
  }
  return phi;
}

Mat15 nilpotent_exp(const Vec3& g, double dt) {
  const Mat15 a = build_A(Vec3::Zero(), g);
  return Mat15::Identity() + dt * a + 0.5 * dt * dt * a * a;
}

GramianReport GramianReport::from(const Eigen::MatrixXd& W, double t0, double t1, double mu) {
  const Eigen::MatrixXd s = 0.5 * (W + W.transpose());
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues();
  GramianReport r;
  r.t0 = t0;
  r.t1 = t1;
  r.lambda_min = ev.minCoeff();
  r.lambda_max = ev.maxCoeff();
  r.mu_threshold = mu;
  r.pass = r.lambda_min >= mu;
  return r;
}

std::vector<double> simpson_weights(const std::vector<double>& t) {
  const std::size_t n = t.size() < 2 ? 0 : t.size() - 1;
  std::vector<double> w(t.size(), 0.0);
  if (n == 0) return w;
  const double h = (t.back() - t.front()) / static_cast<double>(n);
  if (n == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  std::size_t m = (n % 2 == 0) ? n : n - 3;  // intervals covered by Simpson 1/3
  for (std::size_t k = 0; k + 2 <= m; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  if (m != n) {
    w[m] += 3.0 * h / 8.0;
    w[m + 1] += 9.0 * h / 8.0;
    w[m + 2] += 9.0 * h / 8.0;
    w[m + 3] += 3.0 * h / 8.0;
  }
  return w;
}

Eigen::MatrixXd gramian_continuous_matrix(const MatrixFunction& A, const OutputPath& C, double t,
                                          double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::ValidationError, "gramian window delta must be > 0");
  const auto [a, b] = window_range(C, t, delta);
  const std::vector<double> ts(C.t.begin() + static_cast<long>(a), C.t.begin() + static_cast<long>(b));
  const std::vector<double> w = simpson_weights(ts);
  const double h = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(15, 15);
  Mat15 phi = transition_matrix(A, t, std::max(t, ts.front()), h);
  double prev = std::max(t, ts.front());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (ts[k] > prev) {
      phi = transition_matrix(A, prev, ts[k], h) * phi;
      prev = ts[k];
    }
    const Eigen::MatrixXd cphi = C.C[a + k] * phi;
    W += w[k] * (cphi.transpose() * cphi);
  }
  return W / delta;
}

GramianReport gramian_continuous(const MatrixFunction& A, const OutputPath& C, double t,
                                 double delta, double mu) {
  return GramianReport::from(gramian_continuous_matrix(A, C, t, delta), t, t + delta, mu);
}

Eigen::MatrixXd gramian_discrete_matrix(const std::vector<Mat15>& Phi,
                                        const std::vector<Eigen::MatrixXd>& C) {
  if (Phi.empty() || Phi.size() != C.size()) {
    throw Error(ErrorCode::ValidationError, "discrete gramian needs equal, nonempty lists");
  }
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(15, 15);
  for (std::size_t i = 0; i < Phi.size(); ++i) {
    const Eigen::MatrixXd cphi = C[i] * Phi[i];
    W += cphi.transpose() * cphi;
  }
  return W;
}

GramianReport gramian_discrete(const std::vector<Mat15>& Phi,
                               const std::vector<Eigen::MatrixXd>& C, double mu, double t0,
                               double t1) {
  return GramianReport::from(gramian_discrete_matrix(Phi, C), t0, t1, mu);
}

Lemma1Result lemma1_test(const Eigen::MatrixXd& A, const OutputPath& C, double t, double delta,
                         double mu) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw Error(ErrorCode::ValidationError, "lemma1_test needs a square A");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());

  Lemma1Result r;
  std::vector<Eigen::MatrixXd> powers{Eigen::MatrixXd::Identity(n, n)};
  Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index s = 1; s <= n; ++s) {
    pw = pw * A;
    if (pw.cwiseAbs().maxCoeff() <= 1e-12 * std::pow(scale, static_cast<double>(s))) {
      r.nilpotent = true;
      r.index = static_cast<int>(s);
      break;
    }
    powers.push_back(pw);
  }
  if (!r.nilpotent) {
    const Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    const bool real = es.eigenvalues().imag().cwiseAbs().maxCoeff() <= 1e-9 * scale;
    const Eigen::MatrixXd vecs = es.eigenvectors().real();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(vecs).singularValues();
    const bool diagonalizable = sv.minCoeff() > 1e-10 * sv.maxCoeff();
    if (!real || !diagonalizable) {
      throw Error(ErrorCode::UnsupportedSpectrum,
                  "lemma1_test: A is neither nilpotent nor diagonalizable with real eigenvalues");
    }
    powers.assign(1, Eigen::MatrixXd::Identity(n, n));
    r.index = 1;
  }

  const auto [a, b] = window_range(C, t, delta);
  const std::vector<double> ts(C.t.begin() + static_cast<long>(a), C.t.begin() + static_cast<long>(b));
  const std::vector<double> w = simpson_weights(ts);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    for (const auto& p : powers) {
      const Eigen::MatrixXd cn = C.C[a + k] * p;
      W += w[k] * (cn.transpose() * cn);
    }
  }
  r.lambda_min = min_eig(W);
  r.pass = r.lambda_min >= mu;
  return r;
}

StereoCondition check_stereo_condition(const LandmarkMap& lms, const Vec3& g,
                                       const GeometryTolerances& tol) {
  const std::vector<Landmark> v = lms.to_vector();
  StereoCondition out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      for (std::size_t k = j + 1; k < v.size(); ++k) {
        const Vec3 n = (v[j].position - v[i].position).cross(v[k].position - v[i].position);
        const double area = 0.5 * n.norm();
        if (area <= tol.eps_area) continue;
        if (std::abs(n.dot(g)) > tol.eps_grav * g.norm() * area) {
          out.pass = true;
          out.witness = {v[i].id, v[j].id, v[k].id};
          return out;
        }
      }
    }
  }
  return out;
}

MonoMotionResult check_mono_motion(const std::vector<InertialBearingSample>& history,
                                   const std::array<int, 3>& ids, double eps, double window) {
  if (!(window > 0.0)) throw Error(ErrorCode::ValidationError, "mono motion window must be > 0");
  if (history.size() < 2 || history.back().t - history.front().t < 2.0 * window - kTimeEps) {
    std::ostringstream os;
    os << "bearing history spans "
       << (history.empty() ? 0.0 : history.back().t - history.front().t)
       << " s, fewer than two windows of " << window << " s";
    throw Error(ErrorCode::InsufficientHistory, os.str());
  }
  const double t_end = history.back().t;
  MonoMotionResult r;
  r.pass = true;
  for (int id : ids) {
    double weakest = std::numeric_limits<double>::infinity();
    bool any_anchor = false;
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double ta = history[k].t;
      if (ta + window > t_end + kTimeEps) break;
      const auto ua = history[k].u.find(id);
      if (ua == history[k].u.end()) continue;
      any_anchor = true;
      double best = 0.0;
      for (std::size_t j = k + 1; j < history.size() && history[j].t <= ta + window + kTimeEps;
           ++j) {
        const auto ub = history[j].u.find(id);
        if (ub == history[j].u.end()) continue;
        best = std::max(best, ub->second.cross(ua->second).norm());
      }
      weakest = std::min(weakest, best);
    }
    if (!any_anchor) weakest = 0.0;
    r.weakest[id] = weakest;
    r.per_landmark[id] = weakest >= eps;
    r.pass = r.pass && r.per_landmark[id];
  }
  return r;
}

}  // namespace vinobs
