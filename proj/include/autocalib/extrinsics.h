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

// Extrinsic calibration from two orthogonal vanishing points. Keypoint
// matches between frames become line segments in the undistorted image,
// the segments are split into the two dominant travel directions by their
// orientation histogram, each direction votes for its vanishing point in a
// dense accumulator, and the pair of points fixes the focal length, the
// rotation and (with the camera height) the translation.

#ifndef AUTOCALIB_EXTRINSICS_H_
#define AUTOCALIB_EXTRINSICS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "autocalib/geometry.h"
#include "autocalib/intrinsics.h"
#include "autocalib/json_io.h"

namespace autocalib {

inline constexpr char kSegmentsSchema[] = "autocalib-segments/1";

// A keypoint matched between two frames, in distorted pixels.
struct KeypointMatch {
  int frame_a = 0;
  int frame_b = 0;
  PixelPoint first;
  PixelPoint second;
};

struct SegmentSet {
  int stride = 6;
  std::vector<KeypointMatch> matches;
};

SegmentSet ParseSegments(const Json& document);
Json SegmentsToJson(const SegmentSet& set);
SegmentSet LoadSegments(const std::filesystem::path& path);

class LineSegment {
 public:
  // Throws kInvalidArgument for coincident endpoints.
  LineSegment(PixelPoint p1, PixelPoint p2);

  PixelPoint p1() const { return p1_; }
  PixelPoint p2() const { return p2_; }
  Eigen::Vector2d direction() const { return (p2_.vec() - p1_.vec()).normalized(); }
  // Degrees in [0, 180).
  double orientation() const { return orientation_; }
  double magnitude() const { return (p2_.vec() - p1_.vec()).norm(); }
  // Signed distance of the supporting line from the pixel origin.
  double distance() const;

 private:
  PixelPoint p1_;
  PixelPoint p2_;
  double orientation_;
};

// Distance between two orientations on the 180-degree circle.
double OrientationDistance(double a_deg, double b_deg);

struct SegmentConfig {
  int stride = 6;
  double min_length = 2.0;
};

// Undistorts both endpoints with the intrinsic calibration and drops matches
// whose frame gap differs from the stride or that end up shorter than
// min_length.
std::vector<LineSegment> SegmentsFromMatches(
    std::span<const KeypointMatch> matches, const Intrinsics& intrinsics,
    const DistortionCoefficients& coefficients, const SegmentConfig& config = {});

// Magnitude-weighted orientation histogram. Bin i is centered on
// i * bin_width degrees.
struct OrientationHistogram {
  double bin_width = 1.0;
  std::vector<double> counts;

  static OrientationHistogram Build(std::span<const LineSegment> segments,
                                    double bin_width = 1.0);
  double BinCenter(std::size_t bin) const { return bin * bin_width; }
};

struct PeakConfig {
  double bin_width = 1.0;
  double min_separation = 30.0;
  double secondary_ratio = 0.2;
};

// The two strongest histogram modes at least min_separation apart; first is
// the higher. Throws kUnimodal when no second mode reaches secondary_ratio
// of the first.
std::pair<double, double> OrientationPeaks(std::span<const LineSegment> segments,
                                           const PeakConfig& config = {});

// Segments within half_width degrees of the peak orientation. Throws
// kEmptyCluster when none qualify.
std::vector<LineSegment> ClusterSegments(std::span<const LineSegment> segments,
                                         double peak_deg, double half_width = 5.0);

struct GridConfig {
  // The accumulator spans extent_factor times the image in each axis,
  // centered on the image.
  double extent_factor = 3.0;
  // Pixels per cell; 1 keeps one cell per pixel.
  int downscale = 1;
};

class VoteGrid {
 public:
  VoteGrid(ImageSize image, const GridConfig& config);

  int width() const { return width_; }
  int height() const { return height_; }
  double origin_u() const { return origin_u_; }
  double origin_v() const { return origin_v_; }
  double cell_size() const { return cell_size_; }

  std::uint32_t at(int col, int row) const { return counts_[Index(col, row)]; }
  std::span<const std::uint32_t> counts() const { return counts_; }
  PixelPoint CellCenter(int col, int row) const;
  std::uint64_t Total() const;

  // Cells crossed by the infinite line through the segment, one per column
  // (or per row when the line is steeper than 45 degrees).
  std::vector<std::size_t> Rasterize(const LineSegment& segment) const;
  // Adds one vote to every cell the segment's line crosses; returns the
  // number of cells touched.
  std::size_t Vote(const LineSegment& segment);
  void Merge(const VoteGrid& other);

 private:
  std::size_t Index(int col, int row) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_;
  int height_;
  double origin_u_;
  double origin_v_;
  double cell_size_;
  std::vector<std::uint32_t> counts_;
};

VoteGrid VoteLines(std::span<const LineSegment> cluster, ImageSize image,
                   const GridConfig& config = {});

struct VanishingPointDiagnostics {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d std_dev = Eigen::Vector2d::Zero();  // per axis
  double principal_std = 0.0;
  Eigen::Vector2d direction = Eigen::Vector2d::UnitX();
  std::size_t selected_cells = 0;
  std::uint32_t max_votes = 0;
};

struct VanishingPointEstimate {
  PixelPoint point;
  VanishingPointDiagnostics diagnostics;
};

// Vote-weighted mean of the cells holding at least (1 - top_fraction) of the
// maximum vote, pushed k_sigma standard deviations along the principal axis
// of those cells, towards the cells within 1% of the maximum. Throws
// kEmptyGrid when nothing was voted.
VanishingPointEstimate EstimateVanishingPoint(const VoteGrid& grid,
                                              double top_fraction = 0.2,
                                              double k_sigma = 2.0);

// f^2 = -[(u_x - c_x)(u_y - c_x) + (v_x - c_y)(v_y - c_y)]. Throws
// kInconsistentVPs when the right side is not positive.
double RefineFocalFromVps(PixelPoint vp_x, PixelPoint vp_y, PixelPoint principal);

// Columns are the back-projected vanishing directions, each with a positive
// depth component, and their cross product. Throws kParallelVPs when the
// first two columns are far from orthogonal.
Eigen::Matrix3d RotationFromVps(PixelPoint vp_x, PixelPoint vp_y, double focal,
                                PixelPoint principal);

// Nearest rotation in the Frobenius norm, U diag(1, 1, det(U V^T)) V^T.
// Throws kSingularInput.
Eigen::Matrix3d OrthonormalizeRotation(const Eigen::Matrix3d& raw);

// t = (0, 0, -height / r33). Throws kHorizontalCamera when |r33| <= 1e-6.
Eigen::Vector3d TranslationFromHeight(const Eigen::Matrix3d& R, double height);

struct ExtrinsicConfig {
  SegmentConfig segments;
  PeakConfig peaks;
  double cluster_half_width = 5.0;
  GridConfig grid;
  double top_fraction = 0.2;
  double k_sigma = 2.0;
};

struct ExtrinsicResult {
  double f_new = 0.0;
  Pose pose;
  PixelPoint vp_x;
  PixelPoint vp_y;
  double height = 0.0;
  std::array<VanishingPointDiagnostics, 2> diagnostics;
  std::array<double, 2> peaks{};
  std::array<std::size_t, 2> cluster_sizes{};
};

// Runs the whole extrinsic stage. The two vanishing points are labelled so
// that the ground normal X x Y points towards the camera (r33 < 0). When
// `grids` is given the two accumulators are returned through it.
ExtrinsicResult CalibrateExtrinsics(const SegmentSet& segments,
                                    const IntrinsicResult& intrinsics,
                                    double height,
                                    const ExtrinsicConfig& config = {},
                                    std::vector<VoteGrid>* grids = nullptr);

Json ExtrinsicResultToJson(const ExtrinsicResult& result);
ExtrinsicResult ExtrinsicResultFromJson(const Json& document);

}  // namespace autocalib

#endif  // AUTOCALIB_EXTRINSICS_H_
