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

#include "autocalib/extrinsics.h"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "autocalib/error.h"
#include "parallel.h"

namespace autocalib {
namespace {

constexpr double kMaxColumnDot = 0.5;
constexpr double kMinAbsR33 = 1e-6;
constexpr double kDenseFraction = 0.01;

double Degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

Json Vec2(const Eigen::Vector2d& v) { return {v.x(), v.y()}; }
Json Point(PixelPoint p) { return {p.u, p.v}; }

PixelPoint ReadPoint(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json DiagnosticsToJson(const VanishingPointDiagnostics& d) {
  return {{"mean", Vec2(d.mean)},
          {"std", Vec2(d.std_dev)},
          {"principal_std", d.principal_std},
          {"direction", Vec2(d.direction)},
          {"selected_cells", d.selected_cells},
          {"max_votes", d.max_votes}};
}

}  // namespace

SegmentSet ParseSegments(const Json& document) {
  try {
    const std::string schema = document.at("schema").get<std::string>();
    if (schema != kSegmentsSchema) {
      throw Error(ErrorCode::kSchemaVersionMismatch,
                  "expected '" + std::string(kSegmentsSchema) + "', got '" +
                      schema + "'");
    }
    SegmentSet set;
    set.stride = document.at("stride").get<int>();
    if (set.stride < 1) throw Error(ErrorCode::kParseError, "stride must be >= 1");
    const Json& matches = document.at("matches");
    if (!matches.is_array()) throw Error(ErrorCode::kParseError, "'matches' must be an array");
    set.matches.reserve(matches.size());
    for (std::size_t i = 0; i < matches.size(); ++i) {
      const Json& m = matches[i];
      if (!m.is_array() || m.size() != 6 || !m[0].is_number_integer() ||
          !m[1].is_number_integer()) {
        throw Error(ErrorCode::kParseError,
                    "matches[" + std::to_string(i) +
                        "]: expected [frame_a, frame_b, u1, v1, u2, v2]");
      }
      set.matches.push_back({m[0].get<int>(), m[1].get<int>(),
                             {m[2].get<double>(), m[3].get<double>()},
                             {m[4].get<double>(), m[5].get<double>()}});
    }
    return set;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("segments: ") + e.what());
  }
}

Json SegmentsToJson(const SegmentSet& set) {
  Json matches = Json::array();
  for (const KeypointMatch& m : set.matches) {
    matches.push_back({m.frame_a, m.frame_b, m.first.u, m.first.v, m.second.u,
                       m.second.v});
  }
  return {{"schema", kSegmentsSchema},
          {"stride", set.stride},
          {"matches", std::move(matches)}};
}

SegmentSet LoadSegments(const std::filesystem::path& path) {
  return ParseSegments(ReadJsonFile(path));
}

LineSegment::LineSegment(PixelPoint p1, PixelPoint p2) : p1_(p1), p2_(p2) {
  const Eigen::Vector2d d = p2.vec() - p1.vec();
  if (!(d.norm() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "segment endpoints coincide");
  }
  double angle = Degrees(std::atan2(d.y(), d.x()));
  angle = std::fmod(angle, 180.0);
  if (angle < 0.0) angle += 180.0;
  if (angle >= 180.0) angle = 0.0;
  orientation_ = angle;
}

double LineSegment::distance() const {
  const Eigen::Vector2d d = direction();
  return Eigen::Vector2d(-d.y(), d.x()).dot(p1_.vec());
}

double OrientationDistance(double a_deg, double b_deg) {
  double diff = std::fmod(std::abs(a_deg - b_deg), 180.0);
  return std::min(diff, 180.0 - diff);
}

std::vector<LineSegment> SegmentsFromMatches(
    std::span<const KeypointMatch> matches, const Intrinsics& intrinsics,
    const DistortionCoefficients& coefficients, const SegmentConfig& config) {
  std::vector<LineSegment> segments;
  segments.reserve(matches.size());
  for (const KeypointMatch& m : matches) {
    if (m.frame_b - m.frame_a != config.stride) continue;
    const PixelPoint a = UndistortPixel(intrinsics, coefficients, m.first);
    const PixelPoint b = UndistortPixel(intrinsics, coefficients, m.second);
    const double length = (b.vec() - a.vec()).norm();
    if (!std::isfinite(length) || length < config.min_length || length == 0.0) {
      continue;
    }
    segments.emplace_back(a, b);
  }
  return segments;
}

OrientationHistogram OrientationHistogram::Build(
    std::span<const LineSegment> segments, double bin_width) {
  if (!(bin_width > 0.0) || bin_width > 90.0) {
    throw Error(ErrorCode::kInvalidArgument, "bin width must be in (0, 90]");
  }
  OrientationHistogram histogram;
  histogram.bin_width = bin_width;
  const auto bins = static_cast<std::size_t>(std::ceil(180.0 / bin_width - 1e-9));
  histogram.counts.assign(bins, 0.0);
  for (const LineSegment& s : segments) {
    auto bin = static_cast<std::size_t>(std::floor(s.orientation() / bin_width + 0.5));
    if (bin >= bins) bin = 0;  // wraps onto 0 degrees
    histogram.counts[bin] += s.magnitude();
  }
  return histogram;
}

std::pair<double, double> OrientationPeaks(std::span<const LineSegment> segments,
                                           const PeakConfig& config) {
  if (segments.size() < 2) {
    throw Error(ErrorCode::kUnimodal,
                "need at least two segments, got " + std::to_string(segments.size()));
  }
  const OrientationHistogram histogram =
      OrientationHistogram::Build(segments, config.bin_width);
  const auto& counts = histogram.counts;
  const std::size_t first = static_cast<std::size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
  const double first_deg = histogram.BinCenter(first);

  std::size_t second = counts.size();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (OrientationDistance(histogram.BinCenter(i), first_deg) < config.min_separation) {
      continue;
    }
    if (second == counts.size() || counts[i] > counts[second]) second = i;
  }
  if (second == counts.size() || counts[second] <= 0.0 ||
      counts[second] < config.secondary_ratio * counts[first]) {
    std::ostringstream msg;
    msg << "no second orientation mode " << config.min_separation
        << " degrees away from " << first_deg;
    throw Error(ErrorCode::kUnimodal, msg.str());
  }
  return {first_deg, histogram.BinCenter(second)};
}

std::vector<LineSegment> ClusterSegments(std::span<const LineSegment> segments,
                                         double peak_deg, double half_width) {
  std::vector<LineSegment> cluster;
  for (const LineSegment& s : segments) {
    if (OrientationDistance(s.orientation(), peak_deg) <= half_width) {
      cluster.push_back(s);
    }
  }
  if (cluster.empty()) {
    std::ostringstream msg;
    msg << "no segment within " << half_width << " degrees of " << peak_deg;
    throw Error(ErrorCode::kEmptyCluster, msg.str());
  }
  return cluster;
}

VoteGrid::VoteGrid(ImageSize image, const GridConfig& config) {
  if (!(config.extent_factor > 0.0) || config.downscale < 1 || image.width <= 0 ||
      image.height <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "vote grid needs a positive extent factor, downscale and image size");
  }
  cell_size_ = config.downscale;
  const double span_u = config.extent_factor * image.width;
  const double span_v = config.extent_factor * image.height;
  origin_u_ = 0.5 * image.width - 0.5 * span_u;
  origin_v_ = 0.5 * image.height - 0.5 * span_v;
  width_ = static_cast<int>(std::ceil(span_u / cell_size_));
  height_ = static_cast<int>(std::ceil(span_v / cell_size_));
  counts_.assign(static_cast<std::size_t>(width_) * height_, 0u);
}

PixelPoint VoteGrid::CellCenter(int col, int row) const {
  return {origin_u_ + (col + 0.5) * cell_size_, origin_v_ + (row + 0.5) * cell_size_};
}

std::uint64_t VoteGrid::Total() const {
  std::uint64_t total = 0;
  for (std::uint32_t c : counts_) total += c;
  return total;
}

std::vector<std::size_t> VoteGrid::Rasterize(const LineSegment& segment) const {
  const Eigen::Vector2d origin(origin_u_, origin_v_);
  const Eigen::Vector2d a = (segment.p1().vec() - origin) / cell_size_;
  const Eigen::Vector2d d = segment.p2().vec() - segment.p1().vec();
  std::vector<std::size_t> cells;
  if (std::abs(d.x()) >= std::abs(d.y())) {
    const double slope = d.y() / d.x();
    for (int col = 0; col < width_; ++col) {
      const double row = std::floor(a.y() + (col + 0.5 - a.x()) * slope);
      if (row >= 0.0 && row < height_) cells.push_back(Index(col, static_cast<int>(row)));
    }
  } else {
    const double slope = d.x() / d.y();
    for (int row = 0; row < height_; ++row) {
      const double col = std::floor(a.x() + (row + 0.5 - a.y()) * slope);
      if (col >= 0.0 && col < width_) cells.push_back(Index(static_cast<int>(col), row));
    }
  }
  return cells;
}

std::size_t VoteGrid::Vote(const LineSegment& segment) {
  const std::vector<std::size_t> cells = Rasterize(segment);
  for (std::size_t cell : cells) ++counts_[cell];
  return cells.size();
}

void VoteGrid::Merge(const VoteGrid& other) {
  if (other.counts_.size() != counts_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot merge grids of different shape");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

VoteGrid VoteLines(std::span<const LineSegment> cluster, ImageSize image,
                   const GridConfig& config) {
  const std::size_t workers = std::clamp<std::size_t>(
      std::min<std::size_t>(std::thread::hardware_concurrency(), cluster.size() / 256),
      1, 4);
  std::vector<VoteGrid> partial(workers, VoteGrid(image, config));
  const std::size_t chunk = (cluster.size() + workers - 1) / workers;
  internal::ParallelFor(
      workers,
      [&](std::size_t w) {
        const std::size_t end = std::min(cluster.size(), (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) partial[w].Vote(cluster[i]);
      },
      /*grain=*/1);
  for (std::size_t w = 1; w < workers; ++w) partial[0].Merge(partial[w]);
  return std::move(partial[0]);
}

VanishingPointEstimate EstimateVanishingPoint(const VoteGrid& grid,
                                              double top_fraction, double k_sigma) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "top_fraction must be in (0, 1]");
  }
  if (!(k_sigma >= 0.0 && k_sigma <= 3.0)) {
    throw Error(ErrorCode::kInvalidArgument, "k_sigma must be in [0, 3]");
  }
  const auto counts = grid.counts();
  const std::uint32_t max_votes =
      counts.empty() ? 0u : *std::max_element(counts.begin(), counts.end());
  if (max_votes == 0) throw Error(ErrorCode::kEmptyGrid, "no votes were cast");

  const double threshold = (1.0 - top_fraction) * max_votes;
  const double dense_threshold = (1.0 - kDenseFraction) * max_votes;

  double weight = 0.0, dense_weight = 0.0;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  Eigen::Vector2d dense_sum = Eigen::Vector2d::Zero();
  std::size_t selected = 0;
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) {
      const double c = grid.at(col, row);
      if (c == 0.0 || c < threshold) continue;
      const Eigen::Vector2d p = grid.CellCenter(col, row).vec();
      ++selected;
      weight += c;
      sum += c * p;
      if (c >= dense_threshold) {
        dense_weight += c;
        dense_sum += c * p;
      }
    }
  }
  const Eigen::Vector2d mean = sum / weight;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) {
      const double c = grid.at(col, row);
      if (c == 0.0 || c < threshold) continue;
      const Eigen::Vector2d d = grid.CellCenter(col, row).vec() - mean;
      covariance += c * d * d.transpose();
    }
  }
  covariance /= weight;

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eigen(covariance);
  Eigen::Vector2d direction = eigen.eigenvectors().col(1);
  const double principal_std = std::sqrt(std::max(0.0, eigen.eigenvalues()(1)));
  const double toward_dense = direction.dot(dense_sum / dense_weight - mean);
  if (std::abs(toward_dense) > 1e-12) {
    if (toward_dense < 0.0) direction = -direction;
  } else if (direction.x() < 0.0 || (direction.x() == 0.0 && direction.y() < 0.0)) {
    direction = -direction;
  }

  VanishingPointEstimate estimate;
  estimate.point = PixelPoint::From(mean + k_sigma * principal_std * direction);
  auto& d = estimate.diagnostics;
  d.mean = mean;
  d.std_dev = covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  d.principal_std = principal_std;
  d.direction = direction;
  d.selected_cells = selected;
  d.max_votes = max_votes;
  return estimate;
}

double RefineFocalFromVps(PixelPoint vp_x, PixelPoint vp_y, PixelPoint principal) {
  const double radicand = -((vp_x.u - principal.u) * (vp_y.u - principal.u) +
                            (vp_x.v - principal.v) * (vp_y.v - principal.v));
  if (!(radicand > 0.0)) {
    std::ostringstream msg;
    msg << "vanishing points (" << vp_x.u << ", " << vp_x.v << ") and (" << vp_y.u
        << ", " << vp_y.v << ") cannot be orthogonal directions";
    throw Error(ErrorCode::kInconsistentVPs, msg.str());
  }
  return std::sqrt(radicand);
}

Eigen::Matrix3d RotationFromVps(PixelPoint vp_x, PixelPoint vp_y, double focal,
                                PixelPoint principal) {
  if (!(focal > 0.0)) throw Error(ErrorCode::kInvalidArgument, "focal must be > 0");
  const Eigen::Vector3d c1 =
      Eigen::Vector3d(vp_x.u - principal.u, vp_x.v - principal.v, focal).normalized();
  const Eigen::Vector3d c2 =
      Eigen::Vector3d(vp_y.u - principal.u, vp_y.v - principal.v, focal).normalized();
  if (std::abs(c1.dot(c2)) > kMaxColumnDot) {
    throw Error(ErrorCode::kParallelVPs, "vanishing directions are nearly parallel");
  }
  Eigen::Matrix3d R;
  R.col(0) = c1;
  R.col(1) = c2;
  R.col(2) = c1.cross(c2);
  if (R.determinant() < 0.0) R.col(2) = -R.col(2);
  return R;
}

Eigen::Matrix3d OrthonormalizeRotation(const Eigen::Matrix3d& raw) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(raw, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sigma = svd.singularValues();
  if (!raw.allFinite() || !(sigma(2) > 1e-12 * sigma(0))) {
    throw Error(ErrorCode::kSingularInput, "rotation estimate is singular");
  }
  const Eigen::Matrix3d U = svd.matrixU();
  const Eigen::Matrix3d V = svd.matrixV();
  Eigen::Vector3d diag(1.0, 1.0, (U * V.transpose()).determinant() < 0.0 ? -1.0 : 1.0);
  return U * diag.asDiagonal() * V.transpose();
}

Eigen::Vector3d TranslationFromHeight(const Eigen::Matrix3d& R, double height) {
  const double r33 = R(2, 2);
  if (std::abs(r33) <= kMinAbsR33) {
    throw Error(ErrorCode::kHorizontalCamera,
                "optical axis is parallel to the ground plane");
  }
  return {0.0, 0.0, -height / r33};
}

ExtrinsicResult CalibrateExtrinsics(const SegmentSet& segments,
                                    const IntrinsicResult& intrinsics, double height,
                                    const ExtrinsicConfig& config,
                                    std::vector<VoteGrid>* grids) {
  if (!(height > 0.0)) {
    throw Error(ErrorCode::kConfigError, "camera height must be > 0");
  }
  const Intrinsics& K = intrinsics.intrinsics;
  const ImageSize image{K.width(), K.height()};
  const std::vector<LineSegment> lines = SegmentsFromMatches(
      segments.matches, K, intrinsics.coefficients, config.segments);
  const auto [peak_a, peak_b] = OrientationPeaks(lines, config.peaks);

  ExtrinsicResult result;
  result.height = height;
  std::array<PixelPoint, 2> vps;
  const std::array<double, 2> peaks{peak_a, peak_b};
  for (int i = 0; i < 2; ++i) {
    const std::vector<LineSegment> cluster =
        ClusterSegments(lines, peaks[i], config.cluster_half_width);
    VoteGrid grid = VoteLines(cluster, image, config.grid);
    const VanishingPointEstimate vp =
        EstimateVanishingPoint(grid, config.top_fraction, config.k_sigma);
    vps[i] = vp.point;
    result.diagnostics[i] = vp.diagnostics;
    result.peaks[i] = peaks[i];
    result.cluster_sizes[i] = cluster.size();
    if (grids) grids->push_back(std::move(grid));
  }

  const PixelPoint principal = K.principal_point();
  result.f_new = RefineFocalFromVps(vps[0], vps[1], principal);
  Eigen::Matrix3d raw = RotationFromVps(vps[0], vps[1], result.f_new, principal);
  if (raw(2, 2) > 0.0) {
    // Label the directions so the ground normal faces the camera.
    std::swap(vps[0], vps[1]);
    std::swap(result.diagnostics[0], result.diagnostics[1]);
    std::swap(result.peaks[0], result.peaks[1]);
    std::swap(result.cluster_sizes[0], result.cluster_sizes[1]);
    if (grids) std::swap((*grids)[0], (*grids)[1]);
    raw = RotationFromVps(vps[0], vps[1], result.f_new, principal);
  }
  result.vp_x = vps[0];
  result.vp_y = vps[1];
  result.pose.R = OrthonormalizeRotation(raw);
  result.pose.t = TranslationFromHeight(result.pose.R, height);
  return result;
}

Json ExtrinsicResultToJson(const ExtrinsicResult& result) {
  Json R = Json::array();
  for (int r = 0; r < 3; ++r) {
    R.push_back({result.pose.R(r, 0), result.pose.R(r, 1), result.pose.R(r, 2)});
  }
  return {{"f_new", result.f_new},
          {"R", std::move(R)},
          {"t", {result.pose.t.x(), result.pose.t.y(), result.pose.t.z()}},
          {"vp_x", Point(result.vp_x)},
          {"vp_y", Point(result.vp_y)},
          {"height", result.height},
          {"diagnostics",
           {{"peaks_deg", {result.peaks[0], result.peaks[1]}},
            {"cluster_sizes", {result.cluster_sizes[0], result.cluster_sizes[1]}},
            {"vp_x", DiagnosticsToJson(result.diagnostics[0])},
            {"vp_y", DiagnosticsToJson(result.diagnostics[1])}}}};
}

ExtrinsicResult ExtrinsicResultFromJson(const Json& document) {
  try {
    ExtrinsicResult result;
    result.f_new = document.at("f_new").get<double>();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        result.pose.R(r, c) = document.at("R").at(r).at(c).get<double>();
      }
      result.pose.t(r) = document.at("t").at(r).get<double>();
    }
    result.vp_x = ReadPoint(document.at("vp_x"));
    result.vp_y = ReadPoint(document.at("vp_y"));
    result.height = document.at("height").get<double>();
    return result;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("extrinsic result: ") + e.what());
  }
}

}  // namespace autocalib
