#include "vinobs/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "vinobs/errors.hpp"
#include "vinobs/tuning.hpp"

namespace vinobs {

namespace {

struct Flow {
  Mat3 R;
  Vec3 p;
  Vec3 v;
  std::array<Vec3, 3> e;
  Mat15 P;
};

Flow from_state(const ObserverState& s) {
  return {s.R_hat.matrix(), s.p_hat, s.v_hat, s.e_hat, s.P};
}

// x + h k
Flow axpy(const Flow& x, double h, const Flow& k) {
  Flow out;
  out.R = x.R + h * k.R;
  out.p = x.p + h * k.p;
  out.v = x.v + h * k.v;
  for (std::size_t i = 0; i < 3; ++i) out.e[i] = x.e[i] + h * k.e[i];
  out.P = x.P + h * k.P;
  return out;
}

Flow rk4_combine(const Flow& x, double h, const Flow& k1, const Flow& k2, const Flow& k3,
                 const Flow& k4) {
  const double w = h / 6.0;
  Flow out;
  out.R = x.R + w * (k1.R + 2.0 * k2.R + 2.0 * k3.R + k4.R);
  out.p = x.p + w * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
  out.v = x.v + w * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  for (std::size_t i = 0; i < 3; ++i) {
    out.e[i] = x.e[i] + w * (k1.e[i] + 2.0 * k2.e[i] + 2.0 * k3.e[i] + k4.e[i]);
  }
  out.P = x.P + w * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
  return out;
}

class Rhs {
 public:
  Rhs(const InputSource& src, const ObserverModel& model, bool correct)
      : src_(src), model_(model), correct_(correct) {}

  // Derivative at (t, x). When rho is non-null it receives a bound on the
  // fastest local rate and blocks the number of innovation blocks.
  Flow operator()(double t, const Flow& x, double* rho = nullptr,
                  std::size_t* blocks = nullptr) const {
    const GainConfig& gains = model_.gains;
    const ImuSample imu = src_.imu(t);
    const Vec3 s_r = sigma_R(x.e, gains);
    const Vec3 g_hat = model_.gravity.x() * x.e[0] + model_.gravity.y() * x.e[1] +
                       model_.gravity.z() * x.e[2];

    Flow d;
    d.R = x.R * skew(imu.omega + x.R.transpose() * s_r);
    d.p = x.v + s_r.cross(x.p);
    d.v = g_hat + x.R * imu.a + s_r.cross(x.v);
    for (std::size_t i = 0; i < 3; ++i) d.e[i] = s_r.cross(x.e[i]);

    const Mat15 a = build_A(imu.omega, model_.gravity);
    const Mat15 v = gains.tuning == TuningMode::Adaptive
                        ? tune_v(x.R, x.p, x.v, x.e, gains.noise)
                        : gains.V;
    d.P = a * x.P + x.P * a.transpose() + v;

    double rate = imu.omega.norm() + gains.k_R * gains.rho.maxCoeff();
    std::size_t n_blocks = 0;
    if (correct_) {
      if (const auto meas = src_.measurement(t)) {
        const Innovation inn =
            compute_innovation(EstimateView{x.R, x.p, x.e}, *meas, model_.sensors);
        n_blocks = inn.blocks();
        if (!inn.empty()) {
          const Eigen::MatrixXd pct = x.P * inn.C.transpose();
          Eigen::MatrixXd k;
          Eigen::MatrixXd scaled;  // Q^{1/2} C P C^T Q^{1/2} up to similarity
          if (gains.tuning == TuningMode::Adaptive) {
            const Eigen::LLT<Eigen::MatrixXd> qinv(tune_qinv(inn, gains.noise));
            k = qinv.solve(pct.transpose()).transpose();
            if (rho) {
              const auto l = qinv.matrixL();
              const Eigen::MatrixXd cpc = inn.C * pct;
              const Eigen::MatrixXd half = l.solve(cpc);
              scaled = l.solve(half.transpose());
            }
          } else {
            k = gains.q_scale * pct;
            if (rho) scaled = gains.q_scale * (inn.C * pct);
          }
          const Vec15 corr = k * inn.sigma_y;
          d.p += x.R * corr.segment<3>(0);
          for (std::size_t i = 0; i < 3; ++i) {
            d.e[i] += x.R * corr.segment<3>(3 + 3 * static_cast<Eigen::Index>(i));
          }
          d.v += x.R * corr.segment<3>(12);
          d.P -= k * pct.transpose();
          if (rho) {
            const Eigen::MatrixXd sym = 0.5 * (scaled + scaled.transpose());
            rate += Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
                        .eigenvalues()
                        .maxCoeff();
          }
        }
      }
    }
    if (rho) *rho = rate;
    if (blocks) *blocks = n_blocks;
    return d;
  }

 private:
  const InputSource& src_;
  const ObserverModel& model_;
  bool correct_;
};

bool all_finite(const Flow& x) {
  bool ok = x.R.allFinite() && x.p.allFinite() && x.v.allFinite() && x.P.allFinite();
  for (const auto& e : x.e) ok = ok && e.allFinite();
  return ok;
}

}  // namespace

ImuStream::ImuStream(std::vector<ImuSample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw Error(ErrorCode::ValidationError, "imu: stream is empty");
}

ImuSample ImuStream::imu(double t) const {
  if (t <= samples_.front().t) return {t, samples_.front().omega, samples_.front().a};
  if (t >= samples_.back().t) return {t, samples_.back().omega, samples_.back().a};
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](double x, const ImuSample& s) { return x < s.t; });
  const ImuSample& b = *it;
  const ImuSample& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return {t, (1.0 - w) * a.omega + w * b.omega, (1.0 - w) * a.a + w * b.a};
}

void check_finite(const ObserverState& est) {
  bool ok = std::isfinite(est.t) && est.R_hat.matrix().allFinite() && est.p_hat.allFinite() &&
            est.v_hat.allFinite() && est.P.allFinite();
  for (const auto& e : est.e_hat) ok = ok && e.allFinite();
  if (!ok) {
    std::ostringstream os;
    os << "observer state became non-finite at t = " << est.t;
    throw Error(ErrorCode::NonFiniteState, os.str());
  }
}

ObserverState integrate(const ObserverState& est, const InputSource& src,
                        const ObserverModel& model, double dt, bool correct,
                        const IntegratorOptions& opts, StepStats* stats) {
  if (!(dt > 0.0)) throw Error(ErrorCode::ValidationError, "step size dt must be > 0");
  const Rhs rhs(src, model, correct);
  const double t_end = est.t + dt;
  double t = est.t;
  Flow x = from_state(est);
  int substeps = 0;
  std::size_t first_blocks = 0;
  while (t_end - t > 1e-12 * std::max(1.0, std::abs(t_end))) {
    double rho = 0.0;
    std::size_t blocks = 0;
    const Flow k1 = rhs(t, x, &rho, &blocks);
    if (substeps == 0) first_blocks = blocks;
    double h = t_end - t;
    if (rho > 0.0) h = std::min(h, opts.stiffness_bound / rho);
    // Avoid a sliver substep at the end of the interval.
    if (t_end - (t + h) < 0.1 * h) h = t_end - t;
    const Flow k2 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k1));
    const Flow k3 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k2));
    const Flow k4 = rhs(t + h, axpy(x, h, k3));
    x = rk4_combine(x, h, k1, k2, k3, k4);
    if (!all_finite(x)) {
      std::ostringstream os;
      os << "observer state became non-finite at t = " << t + h;
      throw Error(ErrorCode::NonFiniteState, os.str());
    }
    x.R = Rotation::project(x.R).matrix();
    x.P = 0.5 * (x.P + x.P.transpose());
    t += h;
    if (++substeps > opts.max_substeps) {
      std::ostringstream os;
      os << "integrator exceeded " << opts.max_substeps << " substeps near t = " << t;
      throw Error(ErrorCode::NonFiniteState, os.str());
    }
  }
  ObserverState out;
  out.t = t_end;
  out.R_hat = Rotation::from_matrix(x.R, 1e-9);
  out.p_hat = x.p;
  out.v_hat = x.v;
  out.e_hat = x.e;
  out.P = x.P;
  if (stats) *stats = {substeps, first_blocks};
  return out;
}

}  // namespace vinobs
