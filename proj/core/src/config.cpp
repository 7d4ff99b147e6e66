#include "vinobs/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <sstream>
#include <vector>

#include "vinobs/errors.hpp"

namespace vinobs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& value) {
  std::string v = value;
  for (char& c : v) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(v);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

double scalar(const std::string& value) {
  const auto t = tokens(value);
  if (t.size() != 1) throw std::invalid_argument("expected one number");
  return to_double(t[0]);
}

long integer(const std::string& value) {
  const double v = scalar(value);
  if (v != std::floor(v)) throw std::invalid_argument("expected an integer");
  return static_cast<long>(v);
}

Vec3 vec3(const std::string& value) {
  const auto t = tokens(value);
  if (t.size() != 3) throw std::invalid_argument("expected three numbers");
  return {to_double(t[0]), to_double(t[1]), to_double(t[2])};
}

// Scalar s expands to s I; a 3-vector to a diagonal matrix.
Mat3 cov3(const std::string& value) {
  const auto t = tokens(value);
  if (t.size() == 1) return to_double(t[0]) * Mat3::Identity();
  if (t.size() == 3) return vec3(value).asDiagonal();
  throw std::invalid_argument("expected one or three numbers");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mode", [](RunConfig& c, const std::string& v) { c.mode = parse_measurement_mode(trim(v)); }},
      {"observer",
       [](RunConfig& c, const std::string& v) {
         const std::string s = trim(v);
         if (s == "continuous") c.observer = ObserverKind::Continuous;
         else if (s == "hybrid") c.observer = ObserverKind::Hybrid;
         else throw std::invalid_argument("expected continuous or hybrid");
       }},
      {"duration", [](RunConfig& c, const std::string& v) { c.duration = scalar(v); }},
      {"seed",
       [](RunConfig& c, const std::string& v) {
         const long s = integer(v);
         if (s < 0) throw std::invalid_argument("expected a non-negative integer");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"sim.imu_rate", [](RunConfig& c, const std::string& v) { c.sim.imu_rate = scalar(v); }},
      {"sim.vision_rate", [](RunConfig& c, const std::string& v) { c.sim.vision_rate = scalar(v); }},
      {"sim.num_landmarks",
       [](RunConfig& c, const std::string& v) { c.sim.num_landmarks = static_cast<int>(integer(v)); }},
      {"sim.landmark_half_extent",
       [](RunConfig& c, const std::string& v) { c.sim.landmark_half_extent = scalar(v); }},
      {"sim.layout",
       [](RunConfig& c, const std::string& v) {
         const std::string s = trim(v);
         if (s == "random") c.sim.layout = LandmarkLayout::RandomCube;
         else if (s == "coplanar") c.sim.layout = LandmarkLayout::Coplanar;
         else throw std::invalid_argument("expected random or coplanar");
       }},
      {"sim.gravity", [](RunConfig& c, const std::string& v) { c.sim.gravity = vec3(v); }},
      {"sim.bearing_noise", [](RunConfig& c, const std::string& v) { c.sim.bearing_noise = scalar(v); }},
      {"sim.position_noise",
       [](RunConfig& c, const std::string& v) { c.sim.position_noise = scalar(v); }},
      {"sim.gyro_noise", [](RunConfig& c, const std::string& v) { c.sim.gyro_noise = scalar(v); }},
      {"sim.accel_noise", [](RunConfig& c, const std::string& v) { c.sim.accel_noise = scalar(v); }},
      {"sim.fov_half_angle",
       [](RunConfig& c, const std::string& v) { c.sim.visibility.fov_half_angle = scalar(v); }},
      {"sim.max_range",
       [](RunConfig& c, const std::string& v) { c.sim.visibility.max_range = scalar(v); }},
      {"sim.camera_loss_t",
       [](RunConfig& c, const std::string& v) {
         if (!c.sim.camera_loss) c.sim.camera_loss = CameraLoss{};
         c.sim.camera_loss->t = scalar(v);
       }},
      {"sim.camera_loss_cam",
       [](RunConfig& c, const std::string& v) {
         if (!c.sim.camera_loss) c.sim.camera_loss = CameraLoss{2, 0.0};
         c.sim.camera_loss->cam_id = static_cast<int>(integer(v));
       }},
      {"gains.k_R", [](RunConfig& c, const std::string& v) { c.gains.k_R = scalar(v); }},
      {"gains.rho", [](RunConfig& c, const std::string& v) { c.gains.rho = vec3(v); }},
      {"gains.tuning",
       [](RunConfig& c, const std::string& v) {
         const std::string s = trim(v);
         if (s == "constant") c.gains.tuning = TuningMode::Constant;
         else if (s == "adaptive") c.gains.tuning = TuningMode::Adaptive;
         else throw std::invalid_argument("expected constant or adaptive");
       }},
      {"gains.q", [](RunConfig& c, const std::string& v) { c.gains.q_scale = scalar(v); }},
      {"gains.v", [](RunConfig& c, const std::string& v) { c.gains.V = scalar(v) * Mat15::Identity(); }},
      {"noise.cov_omega", [](RunConfig& c, const std::string& v) { c.gains.noise.cov_omega = cov3(v); }},
      {"noise.cov_a", [](RunConfig& c, const std::string& v) { c.gains.noise.cov_a = cov3(v); }},
      {"noise.cov_y", [](RunConfig& c, const std::string& v) { c.gains.noise.cov_y = cov3(v); }},
      {"noise.cov_y_position",
       [](RunConfig& c, const std::string& v) { c.gains.noise.cov_y_position = cov3(v); }},
      {"noise.reg", [](RunConfig& c, const std::string& v) { c.gains.noise.reg = scalar(v); }},
      {"init.axis", [](RunConfig& c, const std::string& v) { c.init.axis = vec3(v); }},
      {"init.angle", [](RunConfig& c, const std::string& v) { c.init.angle = scalar(v); }},
      {"init.p_hat", [](RunConfig& c, const std::string& v) { c.init.p_hat = vec3(v); }},
      {"init.v_hat", [](RunConfig& c, const std::string& v) { c.init.v_hat = vec3(v); }},
      {"init.p0", [](RunConfig& c, const std::string& v) { c.init.p0 = scalar(v); }},
      {"schedule.t_min", [](RunConfig& c, const std::string& v) { c.schedule_t_min = scalar(v); }},
      {"schedule.t_max", [](RunConfig& c, const std::string& v) { c.schedule_t_max = scalar(v); }},
      {"estimator.stereo_pair",
       [](RunConfig& c, const std::string& v) {
         const auto t = tokens(v);
         if (t.size() != 2) throw std::invalid_argument("expected two camera ids");
         c.stereo_pair = {static_cast<int>(integer(t[0])), static_cast<int>(integer(t[1]))};
       }},
      {"estimator.mono_cam",
       [](RunConfig& c, const std::string& v) { c.mono_cam = static_cast<int>(integer(v)); }},
      {"analysis.window", [](RunConfig& c, const std::string& v) { c.analysis.window = scalar(v); }},
      {"analysis.mu", [](RunConfig& c, const std::string& v) { c.analysis.mu = scalar(v); }},
      {"analysis.mono_eps", [](RunConfig& c, const std::string& v) { c.analysis.mono_eps = scalar(v); }},
      {"analysis.mono_window",
       [](RunConfig& c, const std::string& v) { c.analysis.mono_window = scalar(v); }},
      {"analysis.p_prime", [](RunConfig& c, const std::string& v) { c.analysis.p_prime = vec3(v); }},
      {"tol.eps_area", [](RunConfig& c, const std::string& v) { c.analysis.tol.eps_area = scalar(v); }},
      {"tol.eps_grav", [](RunConfig& c, const std::string& v) { c.analysis.tol.eps_grav = scalar(v); }},
      {"tol.rank", [](RunConfig& c, const std::string& v) { c.analysis.tol.rank_rel = scalar(v); }},
      {"tol.dist", [](RunConfig& c, const std::string& v) { c.analysis.tol.dist_rel = scalar(v); }},
  };
  return table;
}

}  // namespace

const char* to_string(ObserverKind k) {
  return k == ObserverKind::Continuous ? "continuous" : "hybrid";
}

void RunConfig::finalize() {
  sim.duration = duration;
  sim.seed = seed;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorCode::ConfigError, key + ": " + why);
  };
  if (!(duration > 0.0)) fail("duration", "must be > 0");
  if (!(sim.imu_rate > 0.0)) fail("sim.imu_rate", "must be > 0");
  if (!(sim.vision_rate > 0.0)) fail("sim.vision_rate", "must be > 0");
  if (sim.num_landmarks < 1) fail("sim.num_landmarks", "must be >= 1");
  if (!(sim.landmark_half_extent > 0.0)) fail("sim.landmark_half_extent", "must be > 0");
  if (sim.bearing_noise < 0.0) fail("sim.bearing_noise", "must be >= 0");
  if (sim.position_noise < 0.0) fail("sim.position_noise", "must be >= 0");
  if (sim.gyro_noise < 0.0) fail("sim.gyro_noise", "must be >= 0");
  if (sim.accel_noise < 0.0) fail("sim.accel_noise", "must be >= 0");
  if (init.axis.norm() < 1e-12) fail("init.axis", "must be non-zero");
  if (!(init.p0 > 0.0)) fail("init.p0", "must be > 0");
  if (schedule_t_min < 0.0 || !(schedule_t_max > schedule_t_min)) {
    fail("schedule.t_max", "need 0 <= schedule.t_min < schedule.t_max");
  }
  if (!(analysis.window > 0.0)) fail("analysis.window", "must be > 0");
  if (!(analysis.mono_window > 0.0)) fail("analysis.mono_window", "must be > 0");
  if (!(analysis.mono_eps > 0.0)) fail("analysis.mono_eps", "must be > 0");
  gains.validate();
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string at = source + ":" + std::to_string(n);
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, at + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorCode::ConfigError, at + ": unknown key '" + key + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorCode::ConfigError, at + ": " + key + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, at + ": " + key + ": " + e.what());
    }
  }
  cfg.finalize();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.filename().string());
}

}  // namespace vinobs
