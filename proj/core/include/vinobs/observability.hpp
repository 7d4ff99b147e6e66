#pragma once

#include <array>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "vinobs/types.hpp"

namespace vinobs {

/// Sampled body rate with cubic (Catmull-Rom) interpolation between samples.
struct OmegaPath {
  std::vector<double> t;
  std::vector<Vec3> omega;

  /// Clamps to the end samples outside [t.front(), t.back()].
  Vec3 at(double tau) const;
};

using MatrixFunction = std::function<Mat15(double)>;

/// A(t) = build_A(omega(t), g) over a sampled rate.
MatrixFunction a_of(const OmegaPath& path, const Vec3& g);

/// Phi(t1, t0) of d/dt Phi = A(t) Phi, Phi(t0, t0) = I, by RK4 with steps no
/// longer than max_step.
Mat15 transition_matrix(const MatrixFunction& A, double t0, double t1, double max_step);

/// Phi(t1, t0) for A(t) from a sampled rate; steps follow the sample grid.
Mat15 transition_matrix(const OmegaPath& path, const Vec3& g, double t0, double t1);

/// exp(A_bar dt) = I + A_bar dt + A_bar^2 dt^2 / 2 for A_bar = build_A(0, g).
Mat15 nilpotent_exp(const Vec3& g, double dt);

/// Output matrices sampled on a uniform grid; row counts may vary.
struct OutputPath {
  std::vector<double> t;
  std::vector<Eigen::MatrixXd> C;
};

struct GramianReport {
  double t0 = 0.0;
  double t1 = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double mu_threshold = 0.0;
  bool pass = false;

  static GramianReport from(const Eigen::MatrixXd& W, double t0, double t1, double mu);
};

/// W_o = (1/delta) int_t^{t+delta} Phi(tau, t)^T C^T C Phi(tau, t) dtau by
/// composite Simpson over the samples of C inside the window. Requires at
/// least two samples in the window.
Eigen::MatrixXd gramian_continuous_matrix(const MatrixFunction& A, const OutputPath& C, double t,
                                          double delta);
GramianReport gramian_continuous(const MatrixFunction& A, const OutputPath& C, double t,
                                 double delta, double mu);

/// W_o^h = sum_i Phi_i^T C_i^T C_i Phi_i.
Eigen::MatrixXd gramian_discrete_matrix(const std::vector<Mat15>& Phi,
                                        const std::vector<Eigen::MatrixXd>& C);
GramianReport gramian_discrete(const std::vector<Mat15>& Phi,
                               const std::vector<Eigen::MatrixXd>& C, double mu, double t0 = 0.0,
                               double t1 = 0.0);

/// Composite Simpson weights for sample times (uniform spacing); three-eighths
/// rule on the last three intervals when the interval count is odd, trapezoid
/// for a single interval.
std::vector<double> simpson_weights(const std::vector<double>& t);

struct Lemma1Result {
  bool pass = false;
  bool nilpotent = false;
  int index = 1;  // s with N^s = 0 (1 when N = 0)
  double lambda_min = 0.0;
};

/// Stacks O = [C; C N; ...; C N^{s-1}] with N = A for nilpotent A and N = 0 for
/// real-diagonalizable A, and tests int_t^{t+delta} O^T O >= mu I.
/// Throws Error(UnsupportedSpectrum) for any other A.
Lemma1Result lemma1_test(const Eigen::MatrixXd& A, const OutputPath& C, double t, double delta,
                         double mu);

struct GeometryTolerances {
  double eps_area = 1e-6;  // m^2
  double eps_grav = 1e-6;
  double rank_rel = 1e-8;  // singular-value threshold relative to sigma_max
  double dist_rel = 1e-9;  // incidence distance threshold relative to scene size
};

struct StereoCondition {
  bool pass = false;
  std::array<int, 3> witness{0, 0, 0};
};

/// First triple (in id order) that is non-aligned with a plane not parallel to g.
StereoCondition check_stereo_condition(const LandmarkMap& lms, const Vec3& g,
                                       const GeometryTolerances& tol = {});

/// Inertial bearings R R_c y_i at one instant, keyed by landmark id.
struct InertialBearingSample {
  double t = 0.0;
  std::map<int, Vec3> u;
};

struct MonoMotionResult {
  bool pass = false;
  std::map<int, bool> per_landmark;
  std::map<int, double> weakest;  // min over anchors of the best ||u(t) x u(t*)||
};

/// For every anchor t* with t* + window <= t_end, each witness landmark needs
/// some t in (t*, t* + window] with ||u(t) x u(t*)|| >= eps.
/// Throws Error(InsufficientHistory) if the history spans fewer than two windows.
MonoMotionResult check_mono_motion(const std::vector<InertialBearingSample>& history,
                                   const std::array<int, 3>& ids, double eps, double window);

}  // namespace vinobs
