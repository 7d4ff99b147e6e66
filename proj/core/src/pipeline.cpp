#include "vinobs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "vinobs/continuous.hpp"
#include "vinobs/errors.hpp"
#include "vinobs/inputs.hpp"

namespace vinobs {

namespace {

// Ground-truth sample at t (within 1e-9 s), or nullptr.
const GroundTruthSample* truth_at(const Dataset& ds, double t) {
  const auto& g = ds.groundtruth;
  auto it = std::lower_bound(g.begin(), g.end(), t - 1e-9,
                             [](const GroundTruthSample& s, double x) { return s.t < x; });
  if (it == g.end() || std::abs(it->t - t) > 1e-9) return nullptr;
  return &*it;
}

// Nearest ground-truth sample to t.
const GroundTruthSample* nearest_truth(const Dataset& ds, double t) {
  const auto& g = ds.groundtruth;
  if (g.empty()) return nullptr;
  auto it = std::lower_bound(g.begin(), g.end(), t,
                             [](const GroundTruthSample& s, double x) { return s.t < x; });
  if (it == g.end()) return &g.back();
  if (it != g.begin() && t - (it - 1)->t < it->t - t) return &*(it - 1);
  return &*it;
}

TraceRecord record(const Dataset& ds, const ObserverState& est) {
  if (const GroundTruthSample* g = truth_at(ds, est.t)) {
    RigidBodyState s;
    s.t = g->t;
    s.R = g->R;
    s.p = g->p;
    s.v = g->v;
    return make_record(est, &s);
  }
  return make_record(est, nullptr);
}

nlohmann::json to_json(const GramianReport& r) {
  return {{"t0", r.t0},
          {"t1", r.t1},
          {"lambda_min", r.lambda_min},
          {"lambda_max", r.lambda_max},
          {"mu_threshold", r.mu_threshold},
          {"verdict", r.pass ? "pass" : "fail"}};
}

}  // namespace

ObserverState initial_state(const RunConfig& cfg, double t0) {
  ObserverState s;
  s.t = t0;
  s.R_hat = exp_so3(cfg.init.angle * cfg.init.axis.normalized());
  s.p_hat = cfg.init.p_hat;
  s.v_hat = cfg.init.v_hat;
  s.P = cfg.init.p0 * Mat15::Identity();
  return s;
}

ObserverModel make_model(const RunConfig& cfg, const Dataset& ds) {
  ObserverModel m;
  m.gains = cfg.gains;
  m.gravity = cfg.sim.gravity;
  m.sensors.mode = cfg.mode;
  m.sensors.rig = ds.extrinsics;
  m.sensors.stereo_pair = cfg.stereo_pair;
  m.sensors.mono_cam = cfg.mono_cam;
  m.sensors.landmarks = ds.landmarks;
  m.sensors.validate();
  if (cfg.mode == MeasurementMode::Position3d && ds.positions.empty()) {
    throw Error(ErrorCode::ValidationError, "positions.csv: required for mode position3d");
  }
  if (cfg.mode != MeasurementMode::Position3d && ds.bearings.empty()) {
    throw Error(ErrorCode::ValidationError,
                std::string("bearings.csv: required for mode ") + to_string(cfg.mode));
  }
  return m;
}

std::vector<MeasurementSet> vision_sets(const Dataset& ds) {
  std::map<double, MeasurementSet> by_t;
  for (const auto& f : ds.bearings) {
    auto& m = by_t[f.t];
    m.t = f.t;
    m.bearings = f;
  }
  for (const auto& f : ds.positions) {
    auto& m = by_t[f.t];
    m.t = f.t;
    m.positions = f;
  }
  std::vector<MeasurementSet> out;
  out.reserve(by_t.size());
  for (auto& [t, m] : by_t) out.push_back(std::move(m));
  return out;
}

EstimateResult estimate(const RunConfig& cfg, const Dataset& ds) {
  cfg.validate();
  ds.validate();
  const ObserverModel model = make_model(cfg, ds);
  const ObserverState init = initial_state(cfg, ds.imu.front().t);
  EstimateResult res;
  res.trace.reserve(ds.imu.size());

  if (cfg.observer == ObserverKind::Continuous) {
    const DatasetInputs src(ds);
    ObserverState est = init;
    res.trace.push_back(record(ds, est));
    for (std::size_t k = 1; k < ds.imu.size(); ++k) {
      est = step(est, src, model, ds.imu[k].t - est.t);
      est.t = ds.imu[k].t;
      res.trace.push_back(record(ds, est));
    }
    res.final_state = est;
  } else {
    const std::vector<MeasurementSet> vision = vision_sets(ds);
    const MeasurementSchedule schedule =
        schedule_from(vision, cfg.schedule_t_min, cfg.schedule_t_max);
    HybridRun run = run_hybrid(ds.imu, vision, schedule, model, init);
    for (const auto& s : run.trace) res.trace.push_back(record(ds, s));
    res.final_state = run.trace.back();
    res.jumps = std::move(run.jumps);
  }
  return res;
}

Dataset simulate(const RunConfig& cfg) {
  cfg.validate();
  RunConfig c = cfg;
  c.finalize();
  return simulate_dataset(c.sim);
}

AnalysisReport analyze(const RunConfig& cfg, const Dataset& ds) {
  cfg.validate();
  ds.validate();
  const Vec3 g = cfg.sim.gravity;
  AnalysisReport rep;

  SensorSetup sensors;
  sensors.mode = cfg.mode;
  sensors.rig = ds.extrinsics;
  sensors.stereo_pair = cfg.stereo_pair;
  sensors.mono_cam = cfg.mono_cam;
  sensors.landmarks = ds.landmarks;
  sensors.validate();

  OmegaPath omega;
  for (const auto& s : ds.imu) {
    omega.t.push_back(s.t);
    omega.omega.push_back(s.omega);
  }
  OutputPath cpath;
  for (const auto& m : vision_sets(ds)) {
    const Innovation inn = compute_innovation(EstimateView{}, m, sensors);
    cpath.t.push_back(m.t);
    cpath.C.push_back(inn.empty() ? Eigen::MatrixXd::Zero(0, 15) : inn.C);
  }
  if (cpath.t.size() >= 2) {
    const MatrixFunction a = a_of(omega, g);
    const double delta = cfg.analysis.window;
    for (double t = cpath.t.front(); t + delta <= cpath.t.back() + 1e-9; t += delta) {
      rep.windows.push_back(gramian_continuous(a, cpath, t, delta, cfg.analysis.mu));
    }
  }

  rep.stereo = check_stereo_condition(ds.landmarks, g, cfg.analysis.tol);

  if (ds.landmarks.size() < 3) {
    rep.mono.reason = "fewer than three landmarks";
  } else if (!ds.has_groundtruth()) {
    rep.mono.reason = "groundtruth.csv is required for inertial bearings";
  } else if (!ds.camera(cfg.mono_cam)) {
    rep.mono.reason = "no extrinsics for camera " + std::to_string(cfg.mono_cam);
  } else {
    if (rep.stereo.pass) {
      rep.mono.ids = rep.stereo.witness;
    } else {
      auto it = ds.landmarks.begin();
      for (int& id : rep.mono.ids) id = (it++)->first;
    }
    const CameraExtrinsics& cam = *ds.camera(cfg.mono_cam);
    std::vector<InertialBearingSample> history;
    for (const auto& f : ds.bearings) {
      const GroundTruthSample* gt = nearest_truth(ds, f.t);
      InertialBearingSample s;
      s.t = f.t;
      for (const auto& ob : f.observations) {
        if (ob.cam_id != cam.cam_id) continue;
        s.u[ob.landmark_id] = gt->R.matrix() * (cam.R_c * ob.y.vec());
      }
      history.push_back(std::move(s));
    }
    try {
      rep.mono.result =
          check_mono_motion(history, rep.mono.ids, cfg.analysis.mono_eps, cfg.analysis.mono_window);
      rep.mono.available = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientHistory) throw;
      rep.mono.reason = e.what();
    }
  }

  std::optional<Vec3> p_prime = cfg.analysis.p_prime;
  if (!p_prime && ds.has_groundtruth()) p_prime = ds.groundtruth.front().p;
  if (!p_prime) {
    rep.degeneracy.reason = "no analysis.p_prime and no groundtruth.csv";
  } else {
    rep.degeneracy.p_prime = *p_prime;
    try {
      rep.degeneracy.verdict = classify_static_degeneracy(ds.landmarks, *p_prime, g, cfg.analysis.tol);
      rep.degeneracy.available = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooFewLandmarks && e.code() != ErrorCode::CameraOnLandmark &&
          e.code() != ErrorCode::ValidationError) {
        throw;
      }
      rep.degeneracy.reason = e.what();
    }
  }
  return rep;
}

std::string report_to_json(const AnalysisReport& rep) {
  nlohmann::json j;
  j["windows"] = nlohmann::json::array();
  for (const auto& w : rep.windows) j["windows"].push_back(to_json(w));

  j["stereo_condition"] = {{"verdict", rep.stereo.pass ? "pass" : "fail"},
                           {"witness", rep.stereo.pass ? nlohmann::json(rep.stereo.witness)
                                                       : nlohmann::json(nullptr)}};

  nlohmann::json mono = {{"available", rep.mono.available}};
  if (rep.mono.available) {
    mono["verdict"] = rep.mono.result.pass ? "pass" : "fail";
    mono["landmarks"] = rep.mono.ids;
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [id, ok] : rep.mono.result.per_landmark) {
      per[std::to_string(id)] = {{"pass", ok}, {"weakest", rep.mono.result.weakest.at(id)}};
    }
    mono["per_landmark"] = per;
  } else {
    mono["reason"] = rep.mono.reason;
  }
  j["mono_motion"] = mono;

  nlohmann::json deg = {{"available", rep.degeneracy.available}};
  if (rep.degeneracy.available) {
    const DegeneracyVerdict& v = rep.degeneracy.verdict;
    deg["verdict"] = to_string(v.case_label);
    deg["rank_O_prime"] = v.rank_O_prime;
    deg["full_rank_required"] = v.full_rank_required;
    deg["p_prime"] = {rep.degeneracy.p_prime.x(), rep.degeneracy.p_prime.y(),
                      rep.degeneracy.p_prime.z()};
    deg["rank_consistent"] = v.rank_consistent;
    if (v.case_label != DegeneracyCase::Generic && v.case_label != DegeneracyCase::Coplanar &&
        v.case_label != DegeneracyCase::Unclassified) {
      deg["witness"] = v.witness;
    }
  } else {
    deg["reason"] = rep.degeneracy.reason;
  }
  j["static_degeneracy"] = deg;
  return j.dump(2) + "\n";
}

}  // namespace vinobs
