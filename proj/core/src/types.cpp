#include "vinobs/types.hpp"

#include <set>
#include <string>
#include <utility>

#include "vinobs/errors.hpp"

namespace vinobs {

LandmarkMap::LandmarkMap(const std::vector<Landmark>& landmarks) {
  for (const auto& lm : landmarks) insert(lm);
}

void LandmarkMap::insert(const Landmark& lm) {
  if (!by_id_.emplace(lm.id, lm.position).second) {
    throw Error(ErrorCode::ValidationError, "duplicate landmark id " + std::to_string(lm.id));
  }
}

const Vec3& LandmarkMap::position(int id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw Error(ErrorCode::UnknownLandmark, "landmark id " + std::to_string(id));
  }
  return it->second;
}

std::vector<Landmark> LandmarkMap::to_vector() const {
  std::vector<Landmark> out;
  out.reserve(by_id_.size());
  for (const auto& [id, p] : by_id_) out.push_back({id, p});
  return out;
}

void BearingFrame::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& ob : observations) {
    if (!seen.emplace(ob.cam_id, ob.landmark_id).second) {
      throw Error(ErrorCode::ValidationError,
                  "duplicate (cam_id, landmark_id) = (" + std::to_string(ob.cam_id) + ", " +
                      std::to_string(ob.landmark_id) + ") in bearing frame at t = " +
                      std::to_string(t));
    }
  }
}

const BearingObservation* BearingFrame::find(int cam_id, int landmark_id) const {
  for (const auto& ob : observations) {
    if (ob.cam_id == cam_id && ob.landmark_id == landmark_id) return &ob;
  }
  return nullptr;
}

const char* to_string(MeasurementMode mode) {
  switch (mode) {
    case MeasurementMode::Position3d: return "position3d";
    case MeasurementMode::Stereo: return "stereo";
    case MeasurementMode::Monocular: return "monocular";
  }
  return "?";
}

MeasurementMode parse_measurement_mode(const std::string& s) {
  if (s == "position3d") return MeasurementMode::Position3d;
  if (s == "stereo") return MeasurementMode::Stereo;
  if (s == "monocular" || s == "mono") return MeasurementMode::Monocular;
  throw Error(ErrorCode::ConfigError,
              "mode must be one of position3d|stereo|monocular, got '" + s + "'");
}

}  // namespace vinobs
