#pragma once

#include <filesystem>
#include <vector>

#include "vinobs/observer_state.hpp"

namespace vinobs {

/// One row of an estimation trace. Error columns are NaN without ground truth.
struct TraceRecord {
  double t = 0.0;
  double att_err = 0.0;  // |R_tilde|_I
  double pos_err = 0.0;  // ||p_tilde||
  double vel_err = 0.0;  // ||v_tilde||
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 R = Mat3::Identity();
};

/// Record for est; errors from error_state when truth is given.
TraceRecord make_record(const ObserverState& est, const RigidBodyState* truth);

/// CSV with header t,att_err,pos_err,vel_err,px,py,pz,vx,vy,vz,r11..r33.
/// Throws Error(ValidationError) for an empty trace and Error(IoError).
void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& records);

/// Throws Error(ParseError) with file:line and Error(IoError).
std::vector<TraceRecord> read_trace(const std::filesystem::path& path);

}  // namespace vinobs
