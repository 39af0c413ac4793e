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

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "autocalib/error.h"
#include "autocalib/oracle.h"
#include "test_support.h"

namespace autocalib {
namespace {

using testing::RandomRotation;

constexpr ImageSize kImage{1280, 720};

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

LineSegment AtAngle(double degrees, double length = 10.0, Eigen::Vector2d start = {0, 0}) {
  const double a = degrees * std::numbers::pi / 180.0;
  const Eigen::Vector2d end = start + length * Eigen::Vector2d(std::cos(a), std::sin(a));
  return LineSegment(PixelPoint::From(start), PixelPoint::From(end));
}

// Segment through `through` in direction `degrees`, centered on it.
LineSegment Through(Eigen::Vector2d through, double degrees) {
  const double a = degrees * std::numbers::pi / 180.0;
  const Eigen::Vector2d d(std::cos(a), std::sin(a));
  return LineSegment(PixelPoint::From(through - 5.0 * d), PixelPoint::From(through + 5.0 * d));
}

// Distance from a point to the infinite line through a segment.
double LineDistance(const LineSegment& s, Eigen::Vector2d p) {
  const Eigen::Vector2d d = s.direction();
  const Eigen::Vector2d r = p - s.p1().vec();
  return std::abs(d.x() * r.y() - d.y() * r.x());
}

TEST(SegmentsFromMatches, DropsZeroLengthAndWrongStride) {
  const Intrinsics K(800.0, 1280, 720);
  const std::vector<KeypointMatch> matches = {
      {0, 6, {100, 100}, {100, 100}},
      {0, 5, {100, 100}, {200, 100}},
      {0, 6, {100, 360}, {300, 360}},
  };
  const std::vector<LineSegment> segments = SegmentsFromMatches(matches, K, {});
  ASSERT_EQ(segments.size(), 1u);
  EXPECT_NEAR(segments[0].orientation(), 0.0, 1e-12);
}

TEST(SegmentsFromMatches, ShortSegmentsDropped) {
  const Intrinsics K(800.0, 1280, 720);
  const std::vector<KeypointMatch> matches = {{0, 6, {100, 100}, {101, 100}}};
  EXPECT_TRUE(SegmentsFromMatches(matches, K, {}, {.stride = 6, .min_length = 2.0}).empty());
}

TEST(SegmentsFromMatches, ExtensionsMeetAtTheVanishingPoint) {
  // Pinhole imaging of points moving along one world direction: with no
  // distortion the undistorted segments are exact, and every extension
  // passes through the image of that direction.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Intrinsics K(800.0, 1280, 720);
  const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 0.3, 0).normalized())
                                .toRotationMatrix();
  const Eigen::Vector3d direction(1.0, 0.2, 0.0);
  const Eigen::Vector3d vp_h = K.K() * R * direction;
  const Eigen::Vector2d vp = vp_h.head<2>() / vp_h.z();
  const auto project = [&](const Eigen::Vector3d& world) {
    const Eigen::Vector3d p = K.K() * (R * world + Eigen::Vector3d(0, 0, 12));
    return PixelPoint::From(p.head<2>() / p.z());
  };
  std::vector<KeypointMatch> matches;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d start(4 * u(rng), 4 * u(rng), 0.5 * u(rng));
    matches.push_back({0, 6, project(start), project(start + 0.8 * direction)});
  }
  const std::vector<LineSegment> segments = SegmentsFromMatches(matches, K, {});
  ASSERT_GT(segments.size(), 150u);
  for (const LineSegment& s : segments) EXPECT_LT(LineDistance(s, vp), 1.0);
}

TEST(OrientationPeaks, TwoConstructedModes) {
  std::vector<LineSegment> segments;
  for (int i = 0; i < 50; ++i) segments.push_back(AtAngle(10.0, 5.0 + i));
  for (int i = 0; i < 50; ++i) segments.push_back(AtAngle(100.0, 5.0 + i));
  const auto [a, b] = OrientationPeaks(segments);
  EXPECT_NEAR(std::min(a, b), 10.0, 1e-9);
  EXPECT_NEAR(std::max(a, b), 100.0, 1e-9);
}

TEST(OrientationPeaks, SingleDirectionIsUnimodal) {
  std::vector<LineSegment> segments;
  for (int i = 0; i < 50; ++i) segments.push_back(AtAngle(45.0, 5.0 + i));
  EXPECT_EQ(CodeOf([&] { OrientationPeaks(segments); }), ErrorCode::kUnimodal);
}

TEST(OrientationPeaks, WrapAroundModesAreOneLobe) {
  std::vector<LineSegment> segments;
  for (int i = 0; i < 50; ++i) segments.push_back(AtAngle(178.0, 10.0));
  for (int i = 0; i < 50; ++i) segments.push_back(AtAngle(2.0, 10.0));
  EXPECT_NEAR(OrientationDistance(178.0, 2.0), 4.0, 1e-12);
  EXPECT_EQ(CodeOf([&] { OrientationPeaks(segments); }), ErrorCode::kUnimodal);
}

TEST(OrientationPeaks, WeakSecondModeIsUnimodal) {
  std::vector<LineSegment> segments;
  for (int i = 0; i < 100; ++i) segments.push_back(AtAngle(30.0, 10.0));
  for (int i = 0; i < 10; ++i) segments.push_back(AtAngle(120.0, 10.0));
  EXPECT_EQ(CodeOf([&] { OrientationPeaks(segments); }), ErrorCode::kUnimodal);
}

TEST(OrientationHistogram, BinsAreCenteredAndMagnitudeWeighted) {
  const std::vector<LineSegment> segments = {AtAngle(0.2, 3.0), AtAngle(179.8, 4.0),
                                             AtAngle(90.4, 7.0)};
  const OrientationHistogram h = OrientationHistogram::Build(segments);
  ASSERT_EQ(h.counts.size(), 180u);
  EXPECT_NEAR(h.counts[0], 7.0, 1e-9);
  EXPECT_NEAR(h.counts[90], 7.0, 1e-9);
  EXPECT_EQ(h.BinCenter(90), 90.0);
}

TEST(ClusterSegments, HalfWidthBoundaryAndWrap) {
  const std::vector<LineSegment> segments = {AtAngle(24.9), AtAngle(25.1), AtAngle(18.0)};
  const double peak = 20.0;
  const std::vector<LineSegment> in = ClusterSegments(
      std::vector<LineSegment>{AtAngle(peak + 4.9), AtAngle(peak + 5.1), AtAngle(peak + 179.0)}, peak);
  ASSERT_EQ(in.size(), 2u);
  EXPECT_NEAR(in[0].orientation(), 24.9, 1e-9);
  EXPECT_NEAR(in[1].orientation(), 19.0, 1e-9);
  EXPECT_EQ(CodeOf([&] { ClusterSegments(segments, 100.0); }), ErrorCode::kEmptyCluster);
}

TEST(VoteGrid, TwoLinesMeetInOneCell) {
  VoteGrid grid(kImage, {});
  const Eigen::Vector2d cross = grid.CellCenter(2000, 1000).vec();
  grid.Vote(Through(cross, 20.0));
  grid.Vote(Through(cross, 110.0));
  EXPECT_EQ(grid.at(2000, 1000), 2u);
  std::uint32_t others = 0;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (c != 2000 || r != 1000) others = std::max(others, grid.at(c, r));
    }
  }
  EXPECT_EQ(others, 1u);
}

TEST(VoteGrid, OneLineTouchesCellsOnce) {
  VoteGrid grid(kImage, {});
  const std::size_t touched = grid.Vote(Through({640, 360}, 33.0));
  EXPECT_EQ(grid.Total(), touched);
  for (std::uint32_t c : grid.counts()) EXPECT_LE(c, 1u);
}

TEST(VoteGrid, ConcurrentLinesStackAtTheirCommonPoint) {
  const Eigen::Vector2d vp(1500.3, -200.7);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LineSegment> cluster;
  for (int i = 0; i < 300; ++i) {
    const Eigen::Vector2d p(1280 * u(rng), 720 * u(rng));
    cluster.emplace_back(PixelPoint::From(p), PixelPoint::From(p + 20.0 * (vp - p).normalized()));
  }
  const VoteGrid grid = VoteLines(cluster, kImage);
  const int col = static_cast<int>(std::floor(vp.x() - grid.origin_u()));
  const int row = static_cast<int>(std::floor(vp.y() - grid.origin_v()));
  std::uint32_t best = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) best = std::max(best, grid.at(col + dc, row + dr));
  }
  EXPECT_EQ(best, cluster.size());
}

TEST(VoteGrid, VoteCountIsConserved) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1000.0, 2500.0);
  std::vector<LineSegment> cluster;
  std::uint64_t expected = 0;
  const VoteGrid reference(kImage, {});
  for (int i = 0; i < 2000; ++i) {
    const PixelPoint a{u(rng), u(rng)};
    const PixelPoint b{u(rng), u(rng)};
    cluster.emplace_back(a, b);
    const std::size_t touched = reference.Rasterize(cluster.back()).size();
    expected += touched;
    // A segment lying inside the grid spans at least max(|du|, |dv|) cells.
    const auto inside = [&](PixelPoint p) {
      return p.u >= reference.origin_u() && p.v >= reference.origin_v() &&
             p.u < reference.origin_u() + reference.width() &&
             p.v < reference.origin_v() + reference.height();
    };
    if (inside(a) && inside(b)) {
      EXPECT_GE(touched + 1, std::max(std::abs(b.u - a.u), std::abs(b.v - a.v)));
    }
  }
  EXPECT_EQ(VoteLines(cluster, kImage).Total(), expected);
}

TEST(VoteGrid, DownscaledCellsCoverTheSameExtent) {
  const VoteGrid fine(kImage, {});
  const VoteGrid coarse(kImage, {.extent_factor = 3.0, .downscale = 4});
  EXPECT_EQ(fine.width(), 3840);
  EXPECT_EQ(coarse.width(), 960);
  EXPECT_EQ(coarse.origin_u(), fine.origin_u());
  EXPECT_EQ(coarse.cell_size(), 4.0);
}

TEST(EstimateVanishingPoint, SingleCellIsExact) {
  VoteGrid grid(kImage, {});
  const Eigen::Vector2d cross = grid.CellCenter(1700, 900).vec();
  grid.Vote(Through(cross, 15.0));
  grid.Vote(Through(cross, 75.0));
  for (double k : {0.0, 1.0, 2.0, 3.0}) {
    const VanishingPointEstimate vp = EstimateVanishingPoint(grid, 0.2, k);
    EXPECT_EQ(vp.point.u, cross.x());
    EXPECT_EQ(vp.point.v, cross.y());
  }
}

TEST(EstimateVanishingPoint, SymmetricTwoCellCloud) {
  VoteGrid grid(kImage, {});
  const Eigen::Vector2d a = grid.CellCenter(1500, 1000).vec();
  const Eigen::Vector2d b = grid.CellCenter(1540, 1000).vec();
  for (double angle : {30.0, 80.0, 140.0}) {
    grid.Vote(Through(a, angle));
    grid.Vote(Through(b, angle + 7.0));
  }
  ASSERT_EQ(grid.at(1500, 1000), 3u);
  ASSERT_EQ(grid.at(1540, 1000), 3u);
  const Eigen::Vector2d mid = 0.5 * (a + b);
  const double sigma = 0.5 * (b - a).norm();
  for (double k : {0.0, 2.0}) {
    const VanishingPointEstimate vp = EstimateVanishingPoint(grid, 0.2, k);
    EXPECT_EQ(vp.diagnostics.selected_cells, 2u);
    EXPECT_NEAR(vp.diagnostics.mean.x(), mid.x(), 1e-9);
    EXPECT_NEAR(vp.diagnostics.principal_std, sigma, 1e-9);
    EXPECT_NEAR((vp.point.vec() - mid).norm(), k * sigma, 1e-9);
    EXPECT_NEAR(std::abs(vp.diagnostics.direction.x()), 1.0, 1e-12);
  }
}

TEST(EstimateVanishingPoint, ZeroShiftIsWeightedCentroid) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LineSegment> cluster;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d p(1280 * u(rng), 720 * u(rng));
    const Eigen::Vector2d target(1800 + 30 * u(rng), -300 + 30 * u(rng));
    cluster.emplace_back(PixelPoint::From(p), PixelPoint::From(p + 10.0 * (target - p).normalized()));
  }
  const VoteGrid grid = VoteLines(cluster, kImage);
  const VanishingPointEstimate vp = EstimateVanishingPoint(grid, 0.2, 0.0);
  std::uint32_t peak = 0;
  for (std::uint32_t c : grid.counts()) peak = std::max(peak, c);
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  double weight = 0.0;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      const double n = grid.at(c, r);
      if (n > 0 && n >= 0.8 * peak) {
        sum += n * grid.CellCenter(c, r).vec();
        weight += n;
      }
    }
  }
  EXPECT_NEAR(vp.point.u, sum.x() / weight, 1e-9);
  EXPECT_NEAR(vp.point.v, sum.y() / weight, 1e-9);
}

TEST(EstimateVanishingPoint, OracleGridWithinFivePixels) {
  // Noiseless segments that all point at an in-image vanishing point.
  const Eigen::Vector2d vp(905.4, 210.8);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LineSegment> cluster;
  for (int i = 0; i < 400; ++i) {
    const Eigen::Vector2d p(1280 * u(rng), 720 * u(rng));
    if ((p - vp).norm() < 30) continue;
    cluster.emplace_back(PixelPoint::From(p), PixelPoint::From(p + 15.0 * (vp - p).normalized()));
  }
  const VanishingPointEstimate estimate = EstimateVanishingPoint(VoteLines(cluster, kImage));
  EXPECT_LT((estimate.point.vec() - vp).norm(), 5.0);
}

TEST(EstimateVanishingPoint, EmptyGridAndBadArguments) {
  const VoteGrid grid(kImage, {});
  EXPECT_EQ(CodeOf([&] { EstimateVanishingPoint(grid); }), ErrorCode::kEmptyGrid);
  EXPECT_EQ(CodeOf([&] { EstimateVanishingPoint(grid, 0.2, 3.5); }), ErrorCode::kInvalidArgument);
}

TEST(RefineFocalFromVps, HandExample) {
  const PixelPoint c{640, 360};
  const double f = RefineFocalFromVps({1640, 360}, {-260, 360}, c);
  EXPECT_NEAR(f, std::sqrt(900.0 * 1000.0), 1e-9);
  EXPECT_NEAR(f, 948.683, 1e-3);
  EXPECT_EQ(RefineFocalFromVps({-260, 360}, {1640, 360}, c), f);
}

TEST(RefineFocalFromVps, SameSideIsInconsistent) {
  const PixelPoint c{640, 360};
  EXPECT_EQ(CodeOf([&] { RefineFocalFromVps({1440, 360}, {640, 1160}, c); }),
            ErrorCode::kInconsistentVPs);
  EXPECT_EQ(CodeOf([&] { RefineFocalFromVps({1440, 400}, {1500, 300}, c); }),
            ErrorCode::kInconsistentVPs);
}

TEST(RefineFocalFromVps, RandomRotationsSatisfyTheRelation) {
  std::mt19937_64 rng(6);
  const double f = 800.0;
  const Intrinsics K(f, 1280, 720);
  int checked = 0;
  while (checked < 100) {
    const Eigen::Matrix3d R = RandomRotation(rng);
    const Eigen::Vector3d x = K.K() * R.col(0);
    const Eigen::Vector3d y = K.K() * R.col(1);
    if (std::abs(x.z()) < 1e-3 || std::abs(y.z()) < 1e-3) continue;
    const Eigen::Vector2d vx = x.head<2>() / x.z() - Eigen::Vector2d(640, 360);
    const Eigen::Vector2d vy = y.head<2>() / y.z() - Eigen::Vector2d(640, 360);
    // Relative to the size of the terms, so far-away points stay meaningful.
    const double residual = vx.dot(vy) + f * f;
    EXPECT_LE(std::abs(residual), 1e-6 * f * f * std::max(1.0, vx.norm() * vy.norm() / (f * f)));
    ++checked;
  }
}

TEST(RotationFromVps, HandExample) {
  const Eigen::Matrix3d R = RotationFromVps({1, 0}, {-1, 0}, 1.0, {0, 0});
  const double s = std::sqrt(0.5);
  Eigen::Matrix3d expected;
  expected << s, -s, 0, 0, 0, -1, s, s, 0;
  EXPECT_LT((R - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RotationFromVps, OracleVpsGiveARotation) {
  std::mt19937_64 rng(7);
  const Intrinsics K(700.0, 1280, 720);
  int checked = 0;
  while (checked < 50) {
    Eigen::Matrix3d truth = RandomRotation(rng);
    if (truth(2, 0) < 0.05 || truth(2, 1) < 0.05) continue;
    const Eigen::Vector3d x = K.K() * truth.col(0);
    const Eigen::Vector3d y = K.K() * truth.col(1);
    const Eigen::Matrix3d R = RotationFromVps(PixelPoint::From(x.head<2>() / x.z()),
                                              PixelPoint::From(y.head<2>() / y.z()), 700.0,
                                              K.principal_point());
    EXPECT_LE((R * R.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((R - truth).cwiseAbs().maxCoeff(), 1e-6);
    ++checked;
  }
}

TEST(RotationFromVps, EqualVpsAreParallel) {
  EXPECT_EQ(CodeOf([] { RotationFromVps({900, 100}, {900, 100}, 800.0, {640, 360}); }),
            ErrorCode::kParallelVPs);
}

// Nearest rotation by Horn's quaternion method: the unit quaternion that
// maximizes trace(R^T M) is the top eigenvector of a symmetric 4x4 matrix.
Eigen::Matrix3d HornNearestRotation(const Eigen::Matrix3d& M) {
  const Eigen::Matrix3d S = M.transpose();
  Eigen::Matrix4d N;
  N << S(0, 0) + S(1, 1) + S(2, 2), S(1, 2) - S(2, 1), S(2, 0) - S(0, 2), S(0, 1) - S(1, 0),
      S(1, 2) - S(2, 1), S(0, 0) - S(1, 1) - S(2, 2), S(0, 1) + S(1, 0), S(2, 0) + S(0, 2),
      S(2, 0) - S(0, 2), S(0, 1) + S(1, 0), -S(0, 0) + S(1, 1) - S(2, 2), S(1, 2) + S(2, 1),
      S(0, 1) - S(1, 0), S(2, 0) + S(0, 2), S(1, 2) + S(2, 1), -S(0, 0) - S(1, 1) + S(2, 2);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eigen(N);
  const Eigen::Vector4d q = eigen.eigenvectors().col(3);
  return Eigen::Quaterniond(q(0), q(1), q(2), q(3)).toRotationMatrix();
}

TEST(OrthonormalizeRotation, FixedPointAndScale) {
  std::mt19937_64 rng(8);
  const Eigen::Matrix3d R = RandomRotation(rng);
  EXPECT_LT((OrthonormalizeRotation(R) - R).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((OrthonormalizeRotation(2.0 * Eigen::Matrix3d::Identity()) -
             Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OrthonormalizeRotation, PerturbedInputAgreesWithHorn) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Matrix3d R = RandomRotation(rng);
    const Eigen::Matrix3d raw = R + Eigen::Matrix3d::NullaryExpr([&] { return noise(rng); });
    const Eigen::Matrix3d out = OrthonormalizeRotation(raw);
    EXPECT_TRUE(IsRotation(out));
    EXPECT_LE((out - R).norm(), 0.05);
    EXPECT_LT((out - HornNearestRotation(raw)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(OrthonormalizeRotation, SingularInput) {
  EXPECT_EQ(CodeOf([] { OrthonormalizeRotation(Eigen::Matrix3d::Zero()); }),
            ErrorCode::kSingularInput);
}

TEST(TranslationFromHeight, Examples) {
  EXPECT_EQ(TranslationFromHeight(Eigen::Matrix3d::Identity(), 10.0), Eigen::Vector3d(0, 0, -10));
  const Eigen::Matrix3d R =
      Eigen::AngleAxisd(2.0 * std::numbers::pi / 3.0, Eigen::Vector3d::UnitX()).toRotationMatrix();
  ASSERT_NEAR(R(2, 2), -0.5, 1e-12);
  const Eigen::Vector3d t = TranslationFromHeight(R, 10.0);
  EXPECT_NEAR(t.z(), 20.0, 1e-12);
  const Eigen::Matrix3d level =
      Eigen::AngleAxisd(std::numbers::pi / 2, Eigen::Vector3d::UnitX()).toRotationMatrix();
  EXPECT_EQ(CodeOf([&] { TranslationFromHeight(level, 10.0); }), ErrorCode::kHorizontalCamera);
}

TEST(SegmentsJson, RoundTripAndSchema) {
  SegmentSet set;
  set.stride = 4;
  set.matches = {{0, 4, {1.5, 2.5}, {3.5, 4.5}}, {4, 8, {10, 20}, {30, 40}}};
  const SegmentSet back = ParseSegments(Json::parse(DumpJson(SegmentsToJson(set))));
  EXPECT_EQ(back.stride, 4);
  ASSERT_EQ(back.matches.size(), 2u);
  EXPECT_EQ(back.matches[1].second.v, 40.0);
  Json doc = SegmentsToJson(set);
  doc["schema"] = "autocalib-segments/0";
  EXPECT_EQ(CodeOf([&] { ParseSegments(doc); }), ErrorCode::kSchemaVersionMismatch);
}

TEST(CalibrateExtrinsics, RequiresPositiveHeight) {
  const GeneratedScene scene = GenerateScene({});
  IntrinsicResult intrinsic;
  intrinsic.intrinsics = scene.truth.intrinsics;
  EXPECT_EQ(CodeOf([&] { CalibrateExtrinsics(scene.segments, intrinsic, 0.0); }),
            ErrorCode::kConfigError);
}

TEST(CalibrateExtrinsics, NoiselessOracleRecovery) {
  const GeneratedScene scene = GenerateScene({});
  const IntrinsicResult intrinsic = CalibrateIntrinsics(scene.tracks);
  std::vector<VoteGrid> grids;
  const ExtrinsicResult result =
      CalibrateExtrinsics(scene.segments, intrinsic, scene.truth.height, {}, &grids);
  EXPECT_EQ(grids.size(), 2u);
  EXPECT_TRUE(IsRotation(result.pose.R));
  EXPECT_LE(RotationGeodesicAngle(result.pose.R, scene.truth.pose.R) * 180.0 / std::numbers::pi,
            2.0);
  EXPECT_NEAR(result.f_new, 800.0, 16.0);
  EXPECT_LT(result.pose.R(2, 2), 0.0);
  const ExtrinsicResult back =
      ExtrinsicResultFromJson(Json::parse(DumpJson(ExtrinsicResultToJson(result))));
  EXPECT_EQ(back.pose.R, result.pose.R);
  EXPECT_EQ(back.f_new, result.f_new);
}

}  // namespace
}  // namespace autocalib
