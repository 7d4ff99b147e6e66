#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vinobs/dataset.hpp"
#include "vinobs/errors.hpp"

namespace vinobs {

namespace fs = std::filesystem;

namespace {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

std::string where(const fs::path& file, std::size_t line) {
  return file.filename().string() + ":" + std::to_string(line);
}

std::vector<Row> read_csv(const fs::path& file, const std::vector<std::string>& header) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + file.string());
  std::vector<Row> rows;
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Row r;
    r.line = n;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      r.cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') r.cells.emplace_back();
    if (!have_header) {
      if (r.cells != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw Error(ErrorCode::ParseError, where(file, n) + ": expected header '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (r.cells.size() != header.size()) {
      throw Error(ErrorCode::ParseError, where(file, n) + ": expected " +
                                             std::to_string(header.size()) + " columns, got " +
                                             std::to_string(r.cells.size()));
    }
    rows.push_back(std::move(r));
  }
  if (!have_header) throw Error(ErrorCode::ParseError, where(file, 1) + ": missing header row");
  return rows;
}

double num(const fs::path& file, const Row& r, std::size_t col) {
  const std::string& s = r.cells[col];
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw Error(ErrorCode::ParseError,
                where(file, r.line) + ": column " + std::to_string(col + 1) + ": bad number '" + s + "'");
  }
  return v;
}

int integer(const fs::path& file, const Row& r, std::size_t col) {
  const std::string& s = r.cells[col];
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError,
                where(file, r.line) + ": column " + std::to_string(col + 1) + ": bad integer '" + s + "'");
  }
  return v;
}

Vec3 vec3(const fs::path& file, const Row& r, std::size_t col) {
  return {num(file, r, col), num(file, r, col + 1), num(file, r, col + 2)};
}

Rotation rot(const fs::path& file, const Row& r, std::size_t col) {
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = num(file, r, col + static_cast<std::size_t>(3 * i + j));
  }
  try {
    Rotation::from_matrix(m, 1e-6);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, where(file, r.line) + ": " + e.what());
  }
  return Rotation::project(m);
}

std::vector<std::string> rot_header(const std::string& prefix_cols, bool with_t) {
  std::vector<std::string> h;
  if (with_t) h.push_back("t");
  if (!prefix_cols.empty()) h.push_back(prefix_cols);
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) h.push_back("r" + std::to_string(i) + std::to_string(j));
  }
  return h;
}

const std::vector<std::string> kImuHeader{"t", "wx", "wy", "wz", "ax", "ay", "az"};
const std::vector<std::string> kLandmarkHeader{"id", "x", "y", "z"};
const std::vector<std::string> kBearingHeader{"t", "cam_id", "landmark_id", "bx", "by", "bz"};
const std::vector<std::string> kPositionHeader{"t", "landmark_id", "x", "y", "z"};

std::vector<std::string> groundtruth_header() {
  auto h = rot_header("", true);
  for (const char* c : {"px", "py", "pz", "vx", "vy", "vz"}) h.emplace_back(c);
  return h;
}

std::vector<std::string> extrinsics_header() {
  auto h = rot_header("cam_id", false);
  for (const char* c : {"px", "py", "pz"}) h.emplace_back(c);
  return h;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& file, const std::vector<std::string>& header) : file_(file), out_(file) {
    if (!out_) throw Error(ErrorCode::IoError, "cannot write " + file.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  ~CsvWriter() = default;

  CsvWriter& num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    sep();
    out_ << buf;
    return *this;
  }
  CsvWriter& integer(int v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& vec(const Vec3& v) { return num(v.x()).num(v.y()).num(v.z()); }
  CsvWriter& rot(const Rotation& r) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) num(r.matrix()(i, j));
    }
    return *this;
  }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }
  void close() {
    out_.close();
    if (!out_) throw Error(ErrorCode::IoError, "failed writing " + file_.string());
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  fs::path file_;
  std::ofstream out_;
  bool first_ = true;
};

template <class T>
void check_sorted(const std::vector<T>& v, const char* stream) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k].t > v[k - 1].t)) {
      std::ostringstream os;
      os << stream << ": timestamps not strictly increasing at t = " << v[k].t << " (entry "
         << k + 1 << ")";
      throw Error(ErrorCode::ValidationError, os.str());
    }
  }
}

}  // namespace

const CameraExtrinsics* Dataset::camera(int cam_id) const {
  for (const auto& c : extrinsics) {
    if (c.cam_id == cam_id) return &c;
  }
  return nullptr;
}

void Dataset::validate() const {
  if (imu.empty()) throw Error(ErrorCode::ValidationError, "imu.csv: no samples");
  check_sorted(imu, "imu.csv");
  check_sorted(bearings, "bearings.csv");
  check_sorted(positions, "positions.csv");
  check_sorted(groundtruth, "groundtruth.csv");
  std::set<int> cams;
  for (const auto& c : extrinsics) {
    if (!cams.insert(c.cam_id).second) {
      throw Error(ErrorCode::ValidationError,
                  "extrinsics.csv: duplicate cam_id " + std::to_string(c.cam_id));
    }
  }
  for (const auto& f : bearings) {
    f.validate();
    for (const auto& ob : f.observations) {
      if (!landmarks.contains(ob.landmark_id)) {
        throw Error(ErrorCode::ValidationError,
                    "bearings.csv: unknown landmark_id " + std::to_string(ob.landmark_id));
      }
      if (!cams.count(ob.cam_id)) {
        throw Error(ErrorCode::ValidationError,
                    "bearings.csv: cam_id " + std::to_string(ob.cam_id) + " has no extrinsics");
      }
    }
  }
  for (const auto& f : positions) {
    std::set<int> seen;
    for (const auto& ob : f.observations) {
      if (!landmarks.contains(ob.landmark_id)) {
        throw Error(ErrorCode::ValidationError,
                    "positions.csv: unknown landmark_id " + std::to_string(ob.landmark_id));
      }
      if (!seen.insert(ob.landmark_id).second) {
        throw Error(ErrorCode::ValidationError,
                    "positions.csv: duplicate landmark_id " + std::to_string(ob.landmark_id));
      }
    }
  }
}

Dataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  Dataset ds;

  const fs::path imu_file = dir / "imu.csv";
  for (const auto& r : read_csv(imu_file, kImuHeader)) {
    ds.imu.push_back({num(imu_file, r, 0), vec3(imu_file, r, 1), vec3(imu_file, r, 4)});
  }

  const fs::path lm_file = dir / "landmarks.csv";
  for (const auto& r : read_csv(lm_file, kLandmarkHeader)) {
    try {
      ds.landmarks.insert({integer(lm_file, r, 0), vec3(lm_file, r, 1)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ValidationError) throw;
      throw Error(ErrorCode::ValidationError, where(lm_file, r.line) + ": " + e.what());
    }
  }

  const fs::path ex_file = dir / "extrinsics.csv";
  if (fs::exists(ex_file)) {
    for (const auto& r : read_csv(ex_file, extrinsics_header())) {
      ds.extrinsics.push_back({integer(ex_file, r, 0), rot(ex_file, r, 1), vec3(ex_file, r, 10)});
    }
  }

  const fs::path b_file = dir / "bearings.csv";
  if (fs::exists(b_file)) {
    for (const auto& r : read_csv(b_file, kBearingHeader)) {
      const double t = num(b_file, r, 0);
      const Vec3 y = vec3(b_file, r, 3);
      if (std::abs(y.norm() - 1.0) > 1e-6) {
        throw Error(ErrorCode::ValidationError, where(b_file, r.line) + ": bearing is not unit norm");
      }
      if (ds.bearings.empty() || ds.bearings.back().t != t) ds.bearings.push_back({t, {}});
      ds.bearings.back().observations.push_back(
          {integer(b_file, r, 1), integer(b_file, r, 2), UnitVector3::normalize(y)});
    }
  }

  const fs::path p_file = dir / "positions.csv";
  if (fs::exists(p_file)) {
    for (const auto& r : read_csv(p_file, kPositionHeader)) {
      const double t = num(p_file, r, 0);
      if (ds.positions.empty() || ds.positions.back().t != t) ds.positions.push_back({t, {}});
      ds.positions.back().observations.push_back({integer(p_file, r, 1), vec3(p_file, r, 2)});
    }
  }

  const fs::path g_file = dir / "groundtruth.csv";
  if (fs::exists(g_file)) {
    for (const auto& r : read_csv(g_file, groundtruth_header())) {
      ds.groundtruth.push_back(
          {num(g_file, r, 0), rot(g_file, r, 1), vec3(g_file, r, 10), vec3(g_file, r, 13)});
    }
  }

  ds.validate();
  return ds;
}

void save_dataset(const fs::path& dir, const Dataset& ds) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  {
    CsvWriter w(dir / "imu.csv", kImuHeader);
    for (const auto& s : ds.imu) {
      w.num(s.t).vec(s.omega).vec(s.a);
      w.end_row();
    }
    w.close();
  }
  {
    CsvWriter w(dir / "landmarks.csv", kLandmarkHeader);
    for (const auto& [id, p] : ds.landmarks) {
      w.integer(id).vec(p);
      w.end_row();
    }
    w.close();
  }
  if (!ds.extrinsics.empty()) {
    CsvWriter w(dir / "extrinsics.csv", extrinsics_header());
    for (const auto& c : ds.extrinsics) {
      w.integer(c.cam_id).rot(c.R_c).vec(c.p_c);
      w.end_row();
    }
    w.close();
  }
  if (!ds.bearings.empty()) {
    CsvWriter w(dir / "bearings.csv", kBearingHeader);
    for (const auto& f : ds.bearings) {
      for (const auto& ob : f.observations) {
        w.num(f.t).integer(ob.cam_id).integer(ob.landmark_id).vec(ob.y.vec());
        w.end_row();
      }
    }
    w.close();
  }
  if (!ds.positions.empty()) {
    CsvWriter w(dir / "positions.csv", kPositionHeader);
    for (const auto& f : ds.positions) {
      for (const auto& ob : f.observations) {
        w.num(f.t).integer(ob.landmark_id).vec(ob.y);
        w.end_row();
      }
    }
    w.close();
  }
  if (!ds.groundtruth.empty()) {
    CsvWriter w(dir / "groundtruth.csv", groundtruth_header());
    for (const auto& g : ds.groundtruth) {
      w.num(g.t).rot(g.R).vec(g.p).vec(g.v);
      w.end_row();
    }
    w.close();
  }
}

}  // namespace vinobs
