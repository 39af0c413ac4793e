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

// Intrinsic calibration from vehicle trajectories: the focal length is the
// one whose equidistant undistortion makes the trajectories straightest, and
// the polynomial coefficients are then fit to that undistortion.

#ifndef AUTOCALIB_INTRINSICS_H_
#define AUTOCALIB_INTRINSICS_H_

#include <span>
#include <utility>
#include <vector>

#include "autocalib/geometry.h"
#include "autocalib/json_io.h"
#include "autocalib/tracks.h"

namespace autocalib {

struct ImageSize {
  int width = 0;
  int height = 0;

  double diagonal() const;
};

struct FocalSearchConfig {
  double f_min = 10.0;
  double f_max = 0.0;  // <= 0 means the image diagonal
  double step = 1.0;
  bool refine = true;
};

// (f, total sse) samples of the straightness objective.
using ObjectiveCurve = std::vector<std::pair<double, double>>;

// Sum over tracks of the line-fit sse after centering on the principal point
// and undistorting at `focal`. A track with any point past the rectilinear
// limit contributes ten times its distorted sse instead. Throws kNoTracks.
double StraightnessObjective(std::span<const Track> tracks, double focal,
                             ImageSize size);

struct FocalEstimate {
  double focal = 0.0;
  ObjectiveCurve curve;
};

// Grid search over [f_min, f_max] followed by an optional golden-section
// refinement within one step of the grid minimum. Throws kNoTracks, or
// kDegenerateObjective when the sampled curve is flat.
FocalEstimate EstimateFocal(std::span<const Track> tracks, ImageSize size,
                            const FocalSearchConfig& config = {});

// Least-squares fit of [k1, k2, k3] to the equidistant scale tan(r)/r at the
// normalized radii of the track points. Throws kRankDeficient when the
// design matrix condition number exceeds 1e12.
DistortionCoefficients FitDistortionCoefficients(std::span<const Track> tracks,
                                                 const Intrinsics& intrinsics);

// Throws kInvalidArgument unless 0 < f <= image diagonal.
Intrinsics BuildIntrinsics(double focal, ImageSize size);

struct TrackResidual {
  int track_id = 0;
  double before = 0.0;
  double after = 0.0;
};

struct IntrinsicResult {
  Intrinsics intrinsics{1.0, 1, 1};
  DistortionCoefficients coefficients;
  ObjectiveCurve curve;
  std::vector<TrackResidual> residuals;
};

// Line-fit sse of each track in the distorted image and after polynomial
// undistortion.
std::vector<TrackResidual> TrackResiduals(std::span<const Track> tracks,
                                          const Intrinsics& intrinsics,
                                          const DistortionCoefficients& k);

struct IntrinsicConfig {
  TrackFilterConfig filter;
  int calibration_tracks = 10;
  FocalSearchConfig search;
};

// Filters and selects tracks, searches the focal length on the selection,
// fits the coefficients over every loaded track and reports residuals for
// the selection.
IntrinsicResult CalibrateIntrinsics(const TrackSet& set,
                                    const IntrinsicConfig& config = {});

Json IntrinsicResultToJson(const IntrinsicResult& result);
// Accepts hand-written files: only "f", "dist" and either "image_size" or
// "K" are required.
IntrinsicResult IntrinsicResultFromJson(const Json& document);

}  // namespace autocalib

#endif  // AUTOCALIB_INTRINSICS_H_
