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

// Synthetic ground truth: a fixed equidistant fisheye camera above a flat
// intersection with vehicles driving along two perpendicular roads. The
// generator emits the same trajectory and segment files a video tracker
// would, plus the true calibration, and the scorer compares a recovered
// calibration against it.

#ifndef AUTOCALIB_ORACLE_H_
#define AUTOCALIB_ORACLE_H_

#include <cstdint>
#include <optional>

#include "autocalib/extrinsics.h"
#include "autocalib/geometry.h"
#include "autocalib/intrinsics.h"
#include "autocalib/json_io.h"
#include "autocalib/tracks.h"

namespace autocalib {

// One stretch of synthetic video. Lane offsets are drawn from
// [-lane_spread, lane_spread] and the mid-clip vehicle position along its
// road from [-along_spread, along_spread]; distances are in camera heights.
struct ClipSpec {
  int frame_count = 150;
  int vehicles_per_direction = 8;
  double speed_min = 0.008;  // camera heights per frame
  double speed_max = 0.012;
  double along_spread = 0.3;
};

struct SceneSpec {
  int width = 1280;
  int height = 720;
  double focal = 800.0;

  // Camera attitude. Yaw is the heading of the optical axis from world X,
  // pitch the depression below the horizon, roll the rotation about the
  // optical axis. Degrees.
  double yaw_deg = 45.0;
  double pitch_deg = 45.0;
  double roll_deg = 0.0;
  double camera_height = 10.0;

  // The trajectory file comes from a short clip of slow traffic that stays
  // in view; the segment file from a longer clip with more, faster vehicles.
  ClipSpec tracking;
  ClipSpec matching{300, 40, 0.04, 0.06, 1.5};

  int keypoints_per_vehicle = 4;
  double lane_spread = 0.5;
  // Keypoints sit in a box of this size (length, width, height) on the
  // vehicle, in camera heights.
  double vehicle_length = 0.45;
  double vehicle_width = 0.18;
  double vehicle_height = 0.15;

  double fps = 30.0;
  int stride = 6;
  double noise_sigma = 0.0;  // pixels, on distorted coordinates
  std::uint64_t seed = 42;
};

// Throws kInvalidArgument for inconsistent specs.
void ValidateSceneSpec(const SceneSpec& spec);
Json SceneSpecToJson(const SceneSpec& spec);
// Missing fields keep their defaults.
SceneSpec SceneSpecFromJson(const Json& document);

// Camera pose of the scene, with world X and Y relabelled by a quarter turn
// about Z so both road directions point away from the camera.
Pose ScenePose(const SceneSpec& spec);

struct GroundTruth {
  Intrinsics intrinsics{1.0, 1, 1};
  Pose pose;
  double height = 0.0;
  // Undistorted-image vanishing points of world X and Y; absent when a
  // direction is parallel to the image plane.
  std::optional<PixelPoint> vp_x;
  std::optional<PixelPoint> vp_y;
};

Json GroundTruthToJson(const GroundTruth& truth);
GroundTruth GroundTruthFromJson(const Json& document);

struct GeneratedScene {
  TrackSet tracks;
  SegmentSet segments;
  GroundTruth truth;
  // True when the vanishing points are at infinity and the extrinsic stage
  // cannot work (for instance a camera looking straight down).
  bool degenerate = false;
};

// Deterministic for a given spec. Throws kCameraSeesNothing when no
// trajectory lands in the image.
GeneratedScene GenerateScene(const SceneSpec& spec);

struct RecoveryReport {
  double focal_error_pct = 0.0;
  std::optional<double> f_new_error_pct;
  std::optional<double> rotation_error_deg;
  std::optional<double> vp_x_error_px;
  std::optional<double> vp_y_error_px;
  std::optional<double> translation_error_pct;
  double mean_sse_before = 0.0;
  double mean_sse_after = 0.0;
};

RecoveryReport EvaluateRecovery(const GroundTruth& truth,
                                const IntrinsicResult& intrinsic,
                                const ExtrinsicResult* extrinsic = nullptr);

Json RecoveryReportToJson(const RecoveryReport& report);

}  // namespace autocalib

#endif  // AUTOCALIB_ORACLE_H_
