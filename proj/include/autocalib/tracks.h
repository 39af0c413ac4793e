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

// Vehicle trajectories: the trajectory file format, the coverage and
// tortuosity filters, calibration-track selection and orthogonal line
// fitting.

#ifndef AUTOCALIB_TRACKS_H_
#define AUTOCALIB_TRACKS_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "autocalib/geometry.h"
#include "autocalib/json_io.h"

namespace autocalib {

inline constexpr char kTracksSchema[] = "autocalib-tracks/1";

struct TrackSample {
  int frame = 0;
  PixelPoint point;
};

// One keypoint followed over time. Frames strictly increase; at least two
// samples.
struct Track {
  int id = 0;
  std::vector<TrackSample> samples;

  std::vector<Eigen::Vector2d> Points() const;
  // Sum of consecutive sample distances, pixels.
  double PathLength() const;
  // First-to-last distance, pixels.
  double Displacement() const;
  int FrameSpan() const {
    return samples.back().frame - samples.front().frame + 1;
  }
};

struct VideoMeta {
  int width = 0;
  int height = 0;
  int frame_count = 0;
  double fps = 0.0;
};

struct TrackSet {
  VideoMeta video;
  std::vector<Track> tracks;
};

// Throws kParseError naming the offending track when the invariants fail.
void ValidateTrack(const Track& track);

TrackSet ParseTracks(const Json& document);
Json TracksToJson(const TrackSet& set);
// Throws kIoError, kParseError or kSchemaVersionMismatch.
TrackSet LoadTracks(const std::filesystem::path& path);

struct TrackFilterConfig {
  double coverage_min = 0.8;
  double tortuosity_max = 1.2;
};

// Keeps tracks whose frame span covers at least coverage_min of the clip and
// whose path length is at most tortuosity_max times their displacement.
// Stationary tracks are dropped. Order is preserved.
std::vector<Track> FilterTracks(const std::vector<Track>& tracks,
                                const VideoMeta& video,
                                const TrackFilterConfig& config = {});

// The n tracks with the greatest path length; ties go to the lower id.
std::vector<Track> SelectCalibrationTracks(const std::vector<Track>& tracks,
                                           int n = 10);

// Line n . p = offset with |n| = 1.
struct LineFit {
  Eigen::Vector2d normal = Eigen::Vector2d::UnitY();
  double offset = 0.0;
  double sse = 0.0;  // sum of squared perpendicular distances, pixels^2

  double Distance(const Eigen::Vector2d& p) const {
    return normal.dot(p) - offset;
  }
};

// Total least squares. Throws kDegeneratePoints for fewer than two distinct
// points.
LineFit FitLine(std::span<const Eigen::Vector2d> points);

}  // namespace autocalib

#endif  // AUTOCALIB_TRACKS_H_
