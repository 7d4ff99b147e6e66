#include "vinobs/trace.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "vinobs/errors.hpp"

namespace vinobs {

namespace {

constexpr const char* kHeader =
    "t,att_err,pos_err,vel_err,px,py,pz,vx,vy,vz,r11,r12,r13,r21,r22,r23,r31,r32,r33";
constexpr std::size_t kColumns = 19;

}  // namespace

TraceRecord make_record(const ObserverState& est, const RigidBodyState* truth) {
  TraceRecord r;
  r.t = est.t;
  r.p = est.p_hat;
  r.v = est.v_hat;
  r.R = est.R_hat.matrix();
  if (truth) {
    const ErrorState e = error_state(*truth, est);
    r.att_err = dist_I(e.R_tilde);
    r.pos_err = e.x_tilde.p().norm();
    r.vel_err = e.x_tilde.v().norm();
  } else {
    r.att_err = r.pos_err = r.vel_err = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::ValidationError, "trace: no records to write");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << kHeader << '\n';
  char buf[32];
  auto put = [&](double v, bool first = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) out << ',';
    out << buf;
  };
  for (const auto& r : records) {
    put(r.t, true);
    put(r.att_err);
    put(r.pos_err);
    put(r.vel_err);
    for (int i = 0; i < 3; ++i) put(r.p[i]);
    for (int i = 0; i < 3; ++i) put(r.v[i]);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) put(r.R(i, j));
    }
    out << '\n';
  }
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::vector<TraceRecord> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const std::string name = path.filename().string();
  std::string line;
  int n = 0;
  if (!std::getline(in, line) || (++n, line != kHeader)) {
    throw Error(ErrorCode::ParseError, name + ":1: unexpected trace header");
  }
  std::vector<TraceRecord> out;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != kColumns) {
      throw Error(ErrorCode::ParseError, name + ":" + std::to_string(n) + ": expected 19 columns, got " +
                                             std::to_string(cells.size()));
    }
    double v[kColumns];
    for (std::size_t k = 0; k < kColumns; ++k) {
      const std::string& cell = cells[k];
      char* end = nullptr;
      errno = 0;
      v[k] = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw Error(ErrorCode::ParseError, name + ":" + std::to_string(n) + ": bad number '" +
                                               cell + "'");
      }
    }
    TraceRecord r;
    r.t = v[0];
    r.att_err = v[1];
    r.pos_err = v[2];
    r.vel_err = v[3];
    r.p = Vec3(v[4], v[5], v[6]);
    r.v = Vec3(v[7], v[8], v[9]);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) r.R(i, j) = v[10 + 3 * i + j];
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace vinobs
