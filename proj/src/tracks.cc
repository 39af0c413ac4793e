// Copyright 2026 The autocalib Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "autocalib/tracks.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "autocalib/error.h"

namespace autocalib {
namespace {

constexpr double kStationaryDisplacement = 1e-6;

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParseError, where + ": " + what);
}

const Json& Field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object()) Fail(where, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) Fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int PositiveInt(const Json& value, const std::string& where) {
  if (!value.is_number_integer() || value.get<long long>() <= 0) {
    Fail(where, "expected a positive integer");
  }
  return value.get<int>();
}

double FiniteNumber(const Json& value, const std::string& where) {
  if (!value.is_number()) Fail(where, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) Fail(where, "expected a finite number");
  return x;
}

}  // namespace

std::vector<Eigen::Vector2d> Track::Points() const {
  std::vector<Eigen::Vector2d> points;
  points.reserve(samples.size());
  for (const TrackSample& s : samples) points.push_back(s.point.vec());
  return points;
}

double Track::PathLength() const {
  double length = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    length += (samples[i].point.vec() - samples[i - 1].point.vec()).norm();
  }
  return length;
}

double Track::Displacement() const {
  if (samples.empty()) return 0.0;
  return (samples.back().point.vec() - samples.front().point.vec()).norm();
}

void ValidateTrack(const Track& track) {
  const std::string where = "track " + std::to_string(track.id);
  if (track.samples.size() < 2) Fail(where, "needs at least two points");
  for (std::size_t i = 1; i < track.samples.size(); ++i) {
    if (track.samples[i].frame <= track.samples[i - 1].frame) {
      Fail(where + " point " + std::to_string(i),
           "frame indices must strictly increase");
    }
  }
}

TrackSet ParseTracks(const Json& document) {
  const Json& schema = Field(document, "schema", "document");
  if (!schema.is_string()) Fail("schema", "expected a string");
  if (schema.get<std::string>() != kTracksSchema) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "expected '" + std::string(kTracksSchema) + "', got '" +
                    schema.get<std::string>() + "'");
  }

  TrackSet set;
  const Json& video = Field(document, "video", "document");
  set.video.width = PositiveInt(Field(video, "width", "video"), "video.width");
  set.video.height = PositiveInt(Field(video, "height", "video"), "video.height");
  set.video.frame_count =
      PositiveInt(Field(video, "frame_count", "video"), "video.frame_count");
  set.video.fps = FiniteNumber(Field(video, "fps", "video"), "video.fps");
  if (set.video.fps <= 0.0) Fail("video.fps", "expected a positive number");

  const Json& tracks = Field(document, "tracks", "document");
  if (!tracks.is_array()) Fail("tracks", "expected an array");
  set.tracks.reserve(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const std::string where = "tracks[" + std::to_string(i) + "]";
    const Json& id = Field(tracks[i], "id", where);
    if (!id.is_number_integer()) Fail(where + ".id", "expected an integer");
    Track track;
    track.id = id.get<int>();
    const Json& points = Field(tracks[i], "points", where);
    if (!points.is_array()) Fail(where + ".points", "expected an array");
    track.samples.reserve(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
      const std::string at = where + ".points[" + std::to_string(j) + "]";
      const Json& p = points[j];
      if (!p.is_array() || p.size() != 3) Fail(at, "expected [frame, u, v]");
      if (!p[0].is_number_integer()) Fail(at, "frame must be an integer");
      track.samples.push_back(
          {p[0].get<int>(), {FiniteNumber(p[1], at), FiniteNumber(p[2], at)}});
    }
    ValidateTrack(track);
    set.tracks.push_back(std::move(track));
  }
  return set;
}

Json TracksToJson(const TrackSet& set) {
  Json tracks = Json::array();
  for (const Track& track : set.tracks) {
    Json points = Json::array();
    for (const TrackSample& s : track.samples) {
      points.push_back(Json::array({s.frame, s.point.u, s.point.v}));
    }
    tracks.push_back({{"id", track.id}, {"points", std::move(points)}});
  }
  return {{"schema", kTracksSchema},
          {"video",
           {{"width", set.video.width},
            {"height", set.video.height},
            {"frame_count", set.video.frame_count},
            {"fps", set.video.fps}}},
          {"tracks", std::move(tracks)}};
}

TrackSet LoadTracks(const std::filesystem::path& path) {
  try {
    return ParseTracks(ReadJsonFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) {
      throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
    }
    throw;
  }
}

std::vector<Track> FilterTracks(const std::vector<Track>& tracks,
                                const VideoMeta& video,
                                const TrackFilterConfig& config) {
  if (video.frame_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "frame_count must be >= 1");
  }
  std::vector<Track> kept;
  for (const Track& track : tracks) {
    if (track.samples.size() < 2) continue;
    const double coverage =
        static_cast<double>(track.FrameSpan()) / video.frame_count;
    if (coverage < config.coverage_min) continue;
    const double displacement = track.Displacement();
    if (displacement < kStationaryDisplacement) continue;
    if (track.PathLength() > config.tortuosity_max * displacement) continue;
    kept.push_back(track);
  }
  return kept;
}

std::vector<Track> SelectCalibrationTracks(const std::vector<Track>& tracks,
                                           int n) {
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    order.emplace_back(tracks[i].PathLength(), i);
  }
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return tracks[a.second].id < tracks[b.second].id;
  });
  std::vector<Track> selected;
  const std::size_t count = std::min<std::size_t>(std::max(n, 0), order.size());
  for (std::size_t i = 0; i < count; ++i) selected.push_back(tracks[order[i].second]);
  return selected;
}

LineFit FitLine(std::span<const Eigen::Vector2d> points) {
  const bool distinct =
      points.size() >= 2 &&
      std::any_of(points.begin() + 1, points.end(),
                  [&](const Eigen::Vector2d& p) { return p != points.front(); });
  if (!distinct) {
    throw Error(ErrorCode::kDegeneratePoints,
                "line fit needs at least two distinct points");
  }

  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const Eigen::Vector2d d = p - centroid;
    sxx += d.x() * d.x();
    syy += d.y() * d.y();
    sxy += d.x() * d.y();
  }
  // Major axis of the 2x2 scatter matrix; the normal is perpendicular to it.
  const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  LineFit fit;
  fit.normal = Eigen::Vector2d(-std::sin(angle), std::cos(angle));
  fit.offset = fit.normal.dot(centroid);
  for (const auto& p : points) {
    const double r = fit.normal.dot(p - centroid);
    fit.sse += r * r;
  }
  return fit;
}

}  // namespace autocalib
