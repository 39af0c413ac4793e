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

#include "autocalib/oracle.h"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "autocalib/error.h"

namespace autocalib {
namespace {

constexpr double kAtInfinity = 1e-9;

double Radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

// World-to-camera rotation for a camera looking along `yaw` from world X,
// tilted down by `pitch`, rolled about its optical axis. Rows are the camera
// axes (right, down, forward) in world coordinates; world Z is up.
Eigen::Matrix3d AttitudeRotation(double yaw, double pitch, double roll) {
  const Eigen::Vector3d heading(std::cos(yaw), std::sin(yaw), 0.0);
  const Eigen::Vector3d forward =
      std::cos(pitch) * heading + std::sin(pitch) * Eigen::Vector3d(0.0, 0.0, -1.0);
  const Eigen::Vector3d right(std::sin(yaw), -std::cos(yaw), 0.0);
  const Eigen::Vector3d down = forward.cross(right);
  const Eigen::Vector3d rolled_right = std::cos(roll) * right + std::sin(roll) * down;
  const Eigen::Vector3d rolled_down = -std::sin(roll) * right + std::cos(roll) * down;
  Eigen::Matrix3d R;
  R.row(0) = rolled_right;
  R.row(1) = rolled_down;
  R.row(2) = forward;
  return R;
}

// Quarter turn about world Z that puts the optical axis heading in the
// positive XY quadrant, so r31 > 0 and r32 > 0.
Eigen::Matrix3d CanonicalRelabel(const Eigen::Matrix3d& R) {
  for (int k = 0; k < 4; ++k) {
    const Eigen::Matrix3d G =
        Eigen::AngleAxisd(k * 0.5 * std::numbers::pi, Eigen::Vector3d::UnitZ())
            .toRotationMatrix();
    const Eigen::Matrix3d candidate = R * G;
    if (candidate(2, 0) > 0.0 && candidate(2, 1) >= 0.0) return G;
  }
  return Eigen::Matrix3d::Identity();
}

std::optional<PixelPoint> VanishingPoint(const Intrinsics& K, const Eigen::Vector3d& d) {
  if (std::abs(d.z()) < kAtInfinity) return std::nullopt;
  return PixelPoint{K.cx() + K.focal() * d.x() / d.z(), K.cy() + K.focal() * d.y() / d.z()};
}

Json Matrix(const Eigen::Matrix3d& m) {
  Json rows = Json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

Json OptionalPoint(const std::optional<PixelPoint>& p) {
  if (!p) return nullptr;
  return {p->u, p->v};
}

template <typename T>
void Assign(const Json& document, const char* key, T* out) {
  if (document.contains(key)) *out = document.at(key).get<T>();
}

// Per keypoint, its noisy distorted observation in every frame of the clip
// (nullopt when outside the image or behind the camera).
using Observations = std::vector<std::optional<PixelPoint>>;

std::vector<Observations> SimulateClip(const SceneSpec& spec, const ClipSpec& clip,
                                       const Pose& pose, std::mt19937_64& rng) {
  const double h = spec.camera_height;
  const Eigen::Vector2d center(0.5 * spec.width, 0.5 * spec.height);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> speed(clip.speed_min, clip.speed_max);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double mid = 0.5 * (clip.frame_count - 1);

  std::vector<Observations> keypoints;
  for (int direction = 0; direction < 2; ++direction) {
    const Eigen::Vector3d along_axis = direction == 0 ? Eigen::Vector3d::UnitX()
                                                      : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d lateral_axis = direction == 0 ? Eigen::Vector3d::UnitY()
                                                        : Eigen::Vector3d::UnitX();
    for (int vehicle = 0; vehicle < clip.vehicles_per_direction; ++vehicle) {
      const double lane = spec.lane_spread * h * unit(rng);
      const double along = clip.along_spread * h * unit(rng);
      const double heading = unit(rng) < 0.0 ? -1.0 : 1.0;
      const Eigen::Vector3d velocity = heading * speed(rng) * h * along_axis;
      const Eigen::Vector3d midpoint = along * along_axis + lane * lateral_axis;

      for (int k = 0; k < spec.keypoints_per_vehicle; ++k) {
        const Eigen::Vector3d offset =
            0.5 * spec.vehicle_length * h * unit(rng) * along_axis +
            0.5 * spec.vehicle_width * h * unit(rng) * lateral_axis +
            0.5 * spec.vehicle_height * h * (unit(rng) + 1.0) * Eigen::Vector3d::UnitZ();

        Observations seen(clip.frame_count);
        for (int frame = 0; frame < clip.frame_count; ++frame) {
          const Eigen::Vector3d world = midpoint + offset + (frame - mid) * velocity;
          const Eigen::Vector3d camera = pose.R * world + pose.t;
          // Noise is drawn for every frame so the stream stays aligned no
          // matter which points are visible.
          const Eigen::Vector2d jitter(noise(rng), noise(rng));
          if (!(camera.z() > 0.0)) continue;
          const Eigen::Vector2d rectilinear =
              spec.focal * Eigen::Vector2d(camera.x(), camera.y()) / camera.z();
          const Eigen::Vector2d pixel = center +
                                        DistortEquidistant(rectilinear, spec.focal) +
                                        spec.noise_sigma * jitter;
          if (pixel.x() < 0.0 || pixel.x() >= spec.width || pixel.y() < 0.0 ||
              pixel.y() >= spec.height) {
            continue;
          }
          seen[frame] = PixelPoint::From(pixel);
        }
        keypoints.push_back(std::move(seen));
      }
    }
  }
  return keypoints;
}

Json ClipToJson(const ClipSpec& clip) {
  return {{"frame_count", clip.frame_count},
          {"vehicles_per_direction", clip.vehicles_per_direction},
          {"speed_min", clip.speed_min},
          {"speed_max", clip.speed_max},
          {"along_spread", clip.along_spread}};
}

void ClipFromJson(const Json& document, ClipSpec* clip) {
  Assign(document, "frame_count", &clip->frame_count);
  Assign(document, "vehicles_per_direction", &clip->vehicles_per_direction);
  Assign(document, "speed_min", &clip->speed_min);
  Assign(document, "speed_max", &clip->speed_max);
  Assign(document, "along_spread", &clip->along_spread);
}

}  // namespace

void ValidateSceneSpec(const SceneSpec& spec) {
  std::ostringstream problems;
  if (spec.width <= 0 || spec.height <= 0) problems << " image size must be positive;";
  if (!(spec.focal > 0.0)) problems << " focal must be > 0;";
  if (!(spec.camera_height > 0.0)) problems << " camera_height must be > 0;";
  if (!(spec.pitch_deg > 0.0 && spec.pitch_deg <= 90.0)) {
    problems << " pitch must be in (0, 90] degrees;";
  }
  for (const auto& [name, clip] : {std::pair{"tracking", &spec.tracking},
                                    std::pair{"matching", &spec.matching}}) {
    if (clip->vehicles_per_direction < 1) problems << " " << name << ": need a vehicle;";
    if (!(clip->speed_min > 0.0) || clip->speed_max < clip->speed_min) {
      problems << " " << name << ": need 0 < speed_min <= speed_max;";
    }
    if (clip->frame_count < 2) problems << " " << name << ": need two frames;";
    if (clip->along_spread < 0.0) problems << " " << name << ": along_spread < 0;";
  }
  if (spec.keypoints_per_vehicle < 1) problems << " need at least one keypoint;";
  if (spec.stride < 1) problems << " stride must be >= 1;";
  if (!(spec.noise_sigma >= 0.0)) problems << " noise_sigma must be >= 0;";
  if (spec.lane_spread < 0.0) problems << " lane_spread must be >= 0;";
  if (!problems.str().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scene spec:" + problems.str());
  }
}

Json SceneSpecToJson(const SceneSpec& spec) {
  return {{"width", spec.width},
          {"height", spec.height},
          {"focal", spec.focal},
          {"yaw_deg", spec.yaw_deg},
          {"pitch_deg", spec.pitch_deg},
          {"roll_deg", spec.roll_deg},
          {"camera_height", spec.camera_height},
          {"tracking", ClipToJson(spec.tracking)},
          {"matching", ClipToJson(spec.matching)},
          {"keypoints_per_vehicle", spec.keypoints_per_vehicle},
          {"lane_spread", spec.lane_spread},
          {"vehicle_length", spec.vehicle_length},
          {"vehicle_width", spec.vehicle_width},
          {"vehicle_height", spec.vehicle_height},
          {"fps", spec.fps},
          {"stride", spec.stride},
          {"noise_sigma", spec.noise_sigma},
          {"seed", spec.seed}};
}

SceneSpec SceneSpecFromJson(const Json& document) {
  SceneSpec spec;
  try {
    Assign(document, "width", &spec.width);
    Assign(document, "height", &spec.height);
    Assign(document, "focal", &spec.focal);
    Assign(document, "yaw_deg", &spec.yaw_deg);
    Assign(document, "pitch_deg", &spec.pitch_deg);
    Assign(document, "roll_deg", &spec.roll_deg);
    Assign(document, "camera_height", &spec.camera_height);
    if (document.contains("tracking")) ClipFromJson(document.at("tracking"), &spec.tracking);
    if (document.contains("matching")) ClipFromJson(document.at("matching"), &spec.matching);
    Assign(document, "keypoints_per_vehicle", &spec.keypoints_per_vehicle);
    Assign(document, "lane_spread", &spec.lane_spread);
    Assign(document, "vehicle_length", &spec.vehicle_length);
    Assign(document, "vehicle_width", &spec.vehicle_width);
    Assign(document, "vehicle_height", &spec.vehicle_height);
    Assign(document, "fps", &spec.fps);
    Assign(document, "stride", &spec.stride);
    Assign(document, "noise_sigma", &spec.noise_sigma);
    Assign(document, "seed", &spec.seed);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("scene spec: ") + e.what());
  }
  return spec;
}

Pose ScenePose(const SceneSpec& spec) {
  const Eigen::Matrix3d attitude = AttitudeRotation(
      Radians(spec.yaw_deg), Radians(spec.pitch_deg), Radians(spec.roll_deg));
  Pose pose;
  pose.R = attitude * CanonicalRelabel(attitude);
  // World origin is the ground point on the optical axis.
  pose.t = Eigen::Vector3d(0.0, 0.0, -spec.camera_height / pose.R(2, 2));
  return pose;
}

Json GroundTruthToJson(const GroundTruth& truth) {
  return {{"f", truth.intrinsics.focal()},
          {"dist_model", "equidistant"},
          {"image_size", {truth.intrinsics.width(), truth.intrinsics.height()}},
          {"R", Matrix(truth.pose.R)},
          {"t", {truth.pose.t.x(), truth.pose.t.y(), truth.pose.t.z()}},
          {"height", truth.height},
          {"vp_x", OptionalPoint(truth.vp_x)},
          {"vp_y", OptionalPoint(truth.vp_y)}};
}

GroundTruth GroundTruthFromJson(const Json& document) {
  try {
    GroundTruth truth;
    truth.intrinsics = Intrinsics(document.at("f").get<double>(),
                                  document.at("image_size").at(0).get<int>(),
                                  document.at("image_size").at(1).get<int>());
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        truth.pose.R(r, c) = document.at("R").at(r).at(c).get<double>();
      }
      truth.pose.t(r) = document.at("t").at(r).get<double>();
    }
    truth.height = document.at("height").get<double>();
    for (const auto& [key, slot] : {std::pair{"vp_x", &truth.vp_x}, std::pair{"vp_y", &truth.vp_y}}) {
      if (document.contains(key) && !document.at(key).is_null()) {
        *slot = PixelPoint{document.at(key).at(0).get<double>(),
                           document.at(key).at(1).get<double>()};
      }
    }
    return truth;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("truth: ") + e.what());
  }
}

GeneratedScene GenerateScene(const SceneSpec& spec) {
  ValidateSceneSpec(spec);
  const Intrinsics K(spec.focal, spec.width, spec.height);

  GeneratedScene scene;
  scene.truth.intrinsics = K;
  scene.truth.pose = ScenePose(spec);
  scene.truth.height = spec.camera_height;
  scene.truth.vp_x = VanishingPoint(K, scene.truth.pose.R.col(0));
  scene.truth.vp_y = VanishingPoint(K, scene.truth.pose.R.col(1));
  scene.degenerate = !scene.truth.vp_x || !scene.truth.vp_y;

  std::mt19937_64 rng(spec.seed);
  scene.tracks.video = {spec.width, spec.height, spec.tracking.frame_count, spec.fps};
  int next_id = 0;
  for (const auto& observations : SimulateClip(spec, spec.tracking, scene.truth.pose, rng)) {
    Track track;
    track.id = next_id++;
    for (int frame = 0; frame < spec.tracking.frame_count; ++frame) {
      if (observations[frame]) track.samples.push_back({frame, *observations[frame]});
    }
    if (track.samples.size() >= 2) scene.tracks.tracks.push_back(std::move(track));
  }

  scene.segments.stride = spec.stride;
  for (const auto& observations : SimulateClip(spec, spec.matching, scene.truth.pose, rng)) {
    for (int a = 0; a + spec.stride < spec.matching.frame_count; a += spec.stride) {
      const int b = a + spec.stride;
      if (observations[a] && observations[b]) {
        scene.segments.matches.push_back({a, b, *observations[a], *observations[b]});
      }
    }
  }

  if (scene.tracks.tracks.empty()) {
    throw Error(ErrorCode::kCameraSeesNothing, "no trajectory projects into the image");
  }
  return scene;
}

RecoveryReport EvaluateRecovery(const GroundTruth& truth,
                                const IntrinsicResult& intrinsic,
                                const ExtrinsicResult* extrinsic) {
  RecoveryReport report;
  const double f_true = truth.intrinsics.focal();
  report.focal_error_pct = std::abs(intrinsic.intrinsics.focal() - f_true) / f_true * 100.0;
  if (!intrinsic.residuals.empty()) {
    for (const TrackResidual& r : intrinsic.residuals) {
      report.mean_sse_before += r.before;
      report.mean_sse_after += r.after;
    }
    report.mean_sse_before /= intrinsic.residuals.size();
    report.mean_sse_after /= intrinsic.residuals.size();
  }
  if (extrinsic) {
    report.f_new_error_pct = std::abs(extrinsic->f_new - f_true) / f_true * 100.0;
    report.rotation_error_deg =
        RotationGeodesicAngle(extrinsic->pose.R, truth.pose.R) * 180.0 / std::numbers::pi;
    if (truth.vp_x) report.vp_x_error_px = (extrinsic->vp_x.vec() - truth.vp_x->vec()).norm();
    if (truth.vp_y) report.vp_y_error_px = (extrinsic->vp_y.vec() - truth.vp_y->vec()).norm();
    report.translation_error_pct =
        std::abs(extrinsic->pose.t.z() - truth.pose.t.z()) / std::abs(truth.pose.t.z()) * 100.0;
  }
  return report;
}

Json RecoveryReportToJson(const RecoveryReport& report) {
  const auto optional = [](const std::optional<double>& v) -> Json {
    return v ? Json(*v) : Json(nullptr);
  };
  return {{"focal_error_pct", report.focal_error_pct},
          {"f_new_error_pct", optional(report.f_new_error_pct)},
          {"rotation_error_deg", optional(report.rotation_error_deg)},
          {"vp_x_error_px", optional(report.vp_x_error_px)},
          {"vp_y_error_px", optional(report.vp_y_error_px)},
          {"translation_error_pct", optional(report.translation_error_pct)},
          {"mean_sse_before", report.mean_sse_before},
          {"mean_sse_after", report.mean_sse_after}};
}

}  // namespace autocalib
