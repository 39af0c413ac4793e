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

#include "autocalib/intrinsics.h"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "autocalib/error.h"
#include "parallel.h"

namespace autocalib {
namespace {

constexpr double kBeyondHemispherePenalty = 10.0;
constexpr double kFlatObjective = 1e-12;
constexpr double kMaxCondition = 1e12;
constexpr double kMinFitRadius = 1e-3;

double TrackObjective(const Track& track, double focal, ImageSize size) {
  const Eigen::Vector2d center(0.5 * size.width, 0.5 * size.height);
  std::vector<Eigen::Vector2d> undistorted;
  undistorted.reserve(track.samples.size());
  try {
    for (const TrackSample& s : track.samples) {
      undistorted.push_back(UndistortEquidistant(s.point.vec() - center, focal));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBeyondHemisphere) throw;
    return kBeyondHemispherePenalty * FitLine(track.Points()).sse;
  }
  return FitLine(undistorted).sse;
}

}  // namespace

double ImageSize::diagonal() const {
  return std::hypot(static_cast<double>(width), static_cast<double>(height));
}

double StraightnessObjective(std::span<const Track> tracks, double focal,
                             ImageSize size) {
  if (tracks.empty()) throw Error(ErrorCode::kNoTracks, "no tracks to straighten");
  if (!(focal > 0.0)) throw Error(ErrorCode::kInvalidArgument, "focal must be > 0");
  double total = 0.0;
  for (const Track& track : tracks) total += TrackObjective(track, focal, size);
  return total;
}

FocalEstimate EstimateFocal(std::span<const Track> tracks, ImageSize size,
                            const FocalSearchConfig& config) {
  if (tracks.empty()) throw Error(ErrorCode::kNoTracks, "no tracks to straighten");
  const double f_max = config.f_max > 0.0 ? config.f_max : size.diagonal();
  if (!(config.f_min > 0.0) || !(config.f_min < f_max) || !(config.step > 0.0)) {
    std::ostringstream msg;
    msg << "focal search needs 0 < f_min < f_max and step > 0, got ["
        << config.f_min << ", " << f_max << "] step " << config.step;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }

  const auto count =
      static_cast<std::size_t>(std::floor((f_max - config.f_min) / config.step)) + 1;
  FocalEstimate estimate;
  estimate.curve.resize(count);
  internal::ParallelFor(count, [&](std::size_t i) {
    const double f = std::min(f_max, config.f_min + config.step * static_cast<double>(i));
    estimate.curve[i] = {f, StraightnessObjective(tracks, f, size)};
  });

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t best = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double value = estimate.curve[i].second;
    // Strict comparison keeps the lowest f on ties.
    if (value < estimate.curve[best].second) best = i;
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  if (hi - lo < kFlatObjective) {
    throw Error(ErrorCode::kDegenerateObjective,
                "straightness objective is flat; the tracks carry no curvature");
  }

  estimate.focal = estimate.curve[best].first;
  if (!config.refine) return estimate;

  double a = std::max(config.f_min, estimate.focal - config.step);
  double b = std::min(f_max, estimate.focal + config.step);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = StraightnessObjective(tracks, c, size);
  double fd = StraightnessObjective(tracks, d, size);
  while (b - a > 1e-6 * std::max(1.0, estimate.focal)) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = StraightnessObjective(tracks, c, size);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = StraightnessObjective(tracks, d, size);
    }
  }
  const double refined = 0.5 * (a + b);
  if (StraightnessObjective(tracks, refined, size) < estimate.curve[best].second) {
    estimate.focal = refined;
  }
  return estimate;
}

DistortionCoefficients FitDistortionCoefficients(std::span<const Track> tracks,
                                                 const Intrinsics& intrinsics) {
  std::vector<double> radii;
  for (const Track& track : tracks) {
    for (const TrackSample& s : track.samples) {
      const double r = std::sqrt(NormalizePixel(intrinsics, s.point).SquaredRadius());
      if (r > kMinFitRadius && r < MaxUndistortAngle()) radii.push_back(r);
    }
  }
  if (radii.size() < 3) {
    throw Error(ErrorCode::kRankDeficient,
                "need at least three points off the principal point");
  }

  Eigen::MatrixXd design(radii.size(), 3);
  Eigen::VectorXd target(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    const double r2 = r * r;
    design(i, 0) = r2;
    design(i, 1) = r2 * r2;
    design(i, 2) = r2 * r2 * r2;
    target(i) = std::tan(r) / r - 1.0;
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Vector3d sigma = svd.singularValues();
  if (!(sigma(2) > 0.0) || sigma(0) / sigma(2) > kMaxCondition) {
    std::ostringstream msg;
    msg << "radius range too narrow, condition number "
        << (sigma(2) > 0.0 ? sigma(0) / sigma(2)
                           : std::numeric_limits<double>::infinity());
    throw Error(ErrorCode::kRankDeficient, msg.str());
  }
  const Eigen::Vector3d k = svd.solve(target);
  return {k(0), k(1), k(2)};
}

Intrinsics BuildIntrinsics(double focal, ImageSize size) {
  if (!(focal > 0.0) || focal > size.diagonal()) {
    std::ostringstream msg;
    msg << "focal " << focal << " outside (0, " << size.diagonal() << "]";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  return Intrinsics(focal, size.width, size.height);
}

std::vector<TrackResidual> TrackResiduals(std::span<const Track> tracks,
                                          const Intrinsics& intrinsics,
                                          const DistortionCoefficients& k) {
  std::vector<TrackResidual> residuals;
  residuals.reserve(tracks.size());
  for (const Track& track : tracks) {
    std::vector<Eigen::Vector2d> undistorted;
    undistorted.reserve(track.samples.size());
    for (const TrackSample& s : track.samples) {
      undistorted.push_back(UndistortPixel(intrinsics, k, s.point).vec());
    }
    residuals.push_back(
        {track.id, FitLine(track.Points()).sse, FitLine(undistorted).sse});
  }
  return residuals;
}

IntrinsicResult CalibrateIntrinsics(const TrackSet& set,
                                    const IntrinsicConfig& config) {
  const std::vector<Track> filtered =
      FilterTracks(set.tracks, set.video, config.filter);
  const std::vector<Track> selected =
      SelectCalibrationTracks(filtered, config.calibration_tracks);
  if (selected.empty()) {
    throw Error(ErrorCode::kNoTracks,
                std::to_string(set.tracks.size()) +
                    " tracks loaded, none passed the filters");
  }
  const ImageSize size{set.video.width, set.video.height};
  FocalEstimate focal = EstimateFocal(selected, size, config.search);

  IntrinsicResult result;
  result.intrinsics = BuildIntrinsics(focal.focal, size);
  result.coefficients = FitDistortionCoefficients(set.tracks, result.intrinsics);
  result.curve = std::move(focal.curve);
  result.residuals = TrackResiduals(selected, result.intrinsics, result.coefficients);
  return result;
}

Json IntrinsicResultToJson(const IntrinsicResult& result) {
  const Eigen::Matrix3d K = result.intrinsics.K();
  Json k = Json::array();
  for (int r = 0; r < 3; ++r) k.push_back({K(r, 0), K(r, 1), K(r, 2)});
  Json curve = Json::array();
  for (const auto& [f, sse] : result.curve) curve.push_back({f, sse});
  Json residuals = Json::array();
  for (const TrackResidual& r : result.residuals) {
    residuals.push_back({{"track", r.track_id}, {"before", r.before}, {"after", r.after}});
  }
  return {{"f", result.intrinsics.focal()},
          {"K", std::move(k)},
          {"image_size", {result.intrinsics.width(), result.intrinsics.height()}},
          {"dist",
           {result.coefficients.k1, result.coefficients.k2, result.coefficients.k3}},
          {"curve", std::move(curve)},
          {"residuals", std::move(residuals)}};
}

IntrinsicResult IntrinsicResultFromJson(const Json& document) {
  try {
    const double f = document.at("f").get<double>();
    int width = 0;
    int height = 0;
    if (document.contains("image_size")) {
      width = document.at("image_size").at(0).get<int>();
      height = document.at("image_size").at(1).get<int>();
    } else {
      const Json& K = document.at("K");
      width = static_cast<int>(std::lround(2.0 * K.at(0).at(2).get<double>()));
      height = static_cast<int>(std::lround(2.0 * K.at(1).at(2).get<double>()));
    }
    const Json& dist = document.at("dist");
    if (!dist.is_array() || dist.size() != 3) {
      throw Error(ErrorCode::kParseError, "'dist' must hold [k1, k2, k3]");
    }
    IntrinsicResult result;
    result.intrinsics = Intrinsics(f, width, height);
    result.coefficients = {dist[0].get<double>(), dist[1].get<double>(),
                           dist[2].get<double>()};
    if (document.contains("curve")) {
      for (const Json& p : document.at("curve")) {
        result.curve.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      }
    }
    if (document.contains("residuals")) {
      for (const Json& r : document.at("residuals")) {
        result.residuals.push_back({r.at("track").get<int>(),
                                    r.at("before").get<double>(),
                                    r.at("after").get<double>()});
      }
    }
    return result;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("intrinsic result: ") + e.what());
  }
}

}  // namespace autocalib
