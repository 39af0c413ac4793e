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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "autocalib/error.h"
#include "test_support.h"

namespace autocalib {
namespace {

Json Document(Json tracks) {
  return {{"schema", kTracksSchema},
          {"video", {{"width", 1280}, {"height", 720}, {"frame_count", 100}, {"fps", 30.0}}},
          {"tracks", std::move(tracks)}};
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// Samples at frames first..last of a straight constant-velocity motion.
Track Straight(int id, int first, int last, Eigen::Vector2d start, Eigen::Vector2d step) {
  Track t;
  t.id = id;
  for (int f = first; f <= last; ++f) {
    t.samples.push_back({f, PixelPoint::From(start + (f - first) * step)});
  }
  return t;
}

TEST(ParseTracks, ThreeTracks) {
  const Json doc = Document({
      {{"id", 0}, {"points", {{0, 1.0, 2.0}, {1, 2.0, 3.0}}}},
      {{"id", 5}, {"points", {{3, 1.0, 2.0}, {7, 2.0, 3.5}, {9, 4.0, 4.0}}}},
      {{"id", 2}, {"points", {{0, 0.0, 0.0}, {99, 10.0, 10.0}}}},
  });
  const TrackSet set = ParseTracks(doc);
  ASSERT_EQ(set.tracks.size(), 3u);
  EXPECT_EQ(set.video.frame_count, 100);
  EXPECT_EQ(set.tracks[1].id, 5);
  EXPECT_EQ(set.tracks[1].samples[2].frame, 9);
  EXPECT_DOUBLE_EQ(set.tracks[1].samples[1].point.v, 3.5);
}

TEST(ParseTracks, NonMonotoneFramesAreRejected) {
  const Json doc = Document({{{"id", 0}, {"points", {{0, 1.0, 2.0}, {3, 2.0, 3.0}, {2, 3.0, 4.0}}}}});
  EXPECT_EQ(CodeOf([&] { ParseTracks(doc); }), ErrorCode::kParseError);
}

TEST(ParseTracks, ErrorNamesTheField) {
  const Json doc = Document({{{"id", 0}, {"points", {{0, 1.0, 2.0}, {1, "x", 3.0}}}}});
  try {
    ParseTracks(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("tracks[0].points[1]"), std::string::npos) << e.what();
  }
}

TEST(ParseTracks, EmptyTrackList) {
  const TrackSet set = ParseTracks(Document(Json::array()));
  EXPECT_TRUE(set.tracks.empty());
  EXPECT_EQ(set.video.width, 1280);
}

TEST(ParseTracks, WrongSchemaVersion) {
  Json doc = Document(Json::array());
  doc["schema"] = "autocalib-tracks/2";
  EXPECT_EQ(CodeOf([&] { ParseTracks(doc); }), ErrorCode::kSchemaVersionMismatch);
}

TEST(ParseTracks, SingleSampleTrackRejected) {
  const Json doc = Document({{{"id", 0}, {"points", {{0, 1.0, 2.0}}}}});
  EXPECT_EQ(CodeOf([&] { ParseTracks(doc); }), ErrorCode::kParseError);
}

TEST(TracksJson, RoundTrip) {
  TrackSet set;
  set.video = {640, 480, 50, 25.0};
  set.tracks.push_back(Straight(3, 0, 10, {1.25, 2.5}, {0.1, 0.3}));
  set.tracks.push_back(Straight(8, 5, 40, {100.0, 7.0}, {-1.0, 0.5}));
  const TrackSet back = ParseTracks(ReadJsonFile(
      [&] {
        const auto path = std::filesystem::temp_directory_path() / "autocalib_tracks_rt.json";
        WriteTextFile(path, DumpJson(TracksToJson(set)));
        return path;
      }()));
  ASSERT_EQ(back.tracks.size(), 2u);
  EXPECT_EQ(back.tracks[1].id, 8);
  for (std::size_t i = 0; i < set.tracks.size(); ++i) {
    ASSERT_EQ(back.tracks[i].samples.size(), set.tracks[i].samples.size());
    for (std::size_t j = 0; j < set.tracks[i].samples.size(); ++j) {
      EXPECT_EQ(back.tracks[i].samples[j].point.u, set.tracks[i].samples[j].point.u);
      EXPECT_EQ(back.tracks[i].samples[j].point.v, set.tracks[i].samples[j].point.v);
    }
  }
}

TEST(FilterTracks, CoverageBelowThresholdRejected) {
  const VideoMeta video{1280, 720, 100, 30.0};
  const std::vector<Track> tracks = {Straight(0, 0, 69, {0, 0}, {1, 0}),
                                     Straight(1, 0, 79, {0, 0}, {1, 0}),
                                     Straight(2, 10, 99, {0, 0}, {1, 0})};
  const std::vector<Track> kept = FilterTracks(tracks, video);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].id, 1);
  EXPECT_EQ(kept[1].id, 2);
}

TEST(FilterTracks, StraightTrackKeptArcRejected) {
  const VideoMeta video{1280, 720, 100, 30.0};
  Track arc;
  arc.id = 1;
  for (int f = 0; f < 100; ++f) {
    const double a = std::numbers::pi * f / 99.0;
    arc.samples.push_back({f, {500 + 100 * std::cos(a), 300 + 100 * std::sin(a)}});
  }
  const Track line = Straight(0, 0, 99, {10, 10}, {2, 1});
  EXPECT_NEAR(line.PathLength() / line.Displacement(), 1.0, 1e-12);
  EXPECT_NEAR(arc.PathLength() / arc.Displacement(), std::numbers::pi / 2, 1e-3);
  const std::vector<Track> kept = FilterTracks({line, arc}, video);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].id, 0);
}

TEST(FilterTracks, StationaryTrackRejected) {
  const VideoMeta video{1280, 720, 100, 30.0};
  EXPECT_TRUE(FilterTracks({Straight(0, 0, 99, {5, 5}, {0, 0})}, video).empty());
}

TEST(FilterTracks, SubsetAndIdempotent) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> first(0, 40);
  const VideoMeta video{1280, 720, 100, 30.0};
  std::vector<Track> tracks;
  for (int id = 0; id < 60; ++id) {
    Track t = Straight(id, first(rng), 99, {u(rng) * 100, u(rng) * 100}, {u(rng), u(rng)});
    for (auto& s : t.samples) s.point = {s.point.u + 0.2 * u(rng), s.point.v + 0.2 * u(rng)};
    tracks.push_back(std::move(t));
  }
  const std::vector<Track> once = FilterTracks(tracks, video);
  const std::vector<Track> twice = FilterTracks(once, video);
  ASSERT_EQ(once.size(), twice.size());
  EXPECT_GT(once.size(), 0u);
  EXPECT_LT(once.size(), tracks.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    EXPECT_EQ(once[i].id, twice[i].id);
    EXPECT_TRUE(std::any_of(tracks.begin(), tracks.end(),
                            [&](const Track& t) { return t.id == once[i].id; }));
  }
}

TEST(SelectCalibrationTracks, TenLongestOfFifteen) {
  std::vector<Track> tracks;
  for (int id = 0; id < 15; ++id) tracks.push_back(Straight(id, 0, 10, {0, 0}, {1.0 + (id * 7) % 15, 0}));
  const std::vector<Track> chosen = SelectCalibrationTracks(tracks);
  ASSERT_EQ(chosen.size(), 10u);
  std::vector<double> lengths;
  for (const auto& t : tracks) lengths.push_back(t.PathLength());
  std::sort(lengths.rbegin(), lengths.rend());
  for (const auto& t : chosen) EXPECT_GE(t.PathLength(), lengths[9]);
}

TEST(SelectCalibrationTracks, FewerThanN) {
  std::vector<Track> tracks;
  for (int id = 0; id < 4; ++id) tracks.push_back(Straight(id, 0, 10, {0, 0}, {1.0 + id, 0}));
  EXPECT_EQ(SelectCalibrationTracks(tracks).size(), 4u);
}

TEST(SelectCalibrationTracks, TieGoesToLowerId) {
  std::vector<Track> tracks;
  for (int id = 0; id < 9; ++id) tracks.push_back(Straight(id, 0, 10, {0, 0}, {10.0 + id, 0}));
  tracks.push_back(Straight(42, 0, 10, {0, 0}, {1.0, 0}));
  tracks.push_back(Straight(17, 0, 10, {0, 0}, {1.0, 0}));
  const std::vector<Track> chosen = SelectCalibrationTracks(tracks, 10);
  ASSERT_EQ(chosen.size(), 10u);
  EXPECT_TRUE(std::any_of(chosen.begin(), chosen.end(), [](const Track& t) { return t.id == 17; }));
  EXPECT_FALSE(std::any_of(chosen.begin(), chosen.end(), [](const Track& t) { return t.id == 42; }));
  // Deterministic regardless of input order.
  std::reverse(tracks.begin(), tracks.end());
  const std::vector<Track> again = SelectCalibrationTracks(tracks, 10);
  std::vector<int> a, b;
  for (const auto& t : chosen) a.push_back(t.id);
  for (const auto& t : again) b.push_back(t.id);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
}

TEST(FitLine, CollinearPoints) {
  std::vector<Eigen::Vector2d> points;
  for (int i = 0; i < 10; ++i) points.emplace_back(3.0 + 2.0 * i, -1.0 + 0.5 * i);
  const LineFit fit = FitLine(points);
  EXPECT_NEAR(fit.sse, 0.0, 1e-9);
  for (const auto& p : points) EXPECT_NEAR(fit.Distance(p), 0.0, 1e-9);
}

TEST(FitLine, ThreePointExample) {
  const std::vector<Eigen::Vector2d> points = {{0, 0}, {1, 1}, {2, 0}};
  const LineFit fit = FitLine(points);
  EXPECT_NEAR(fit.sse, testing::BruteForceLineSse(points), 1e-9);
  EXPECT_NEAR(fit.sse, 2.0 / 3.0, 1e-12);
}

TEST(FitLine, VerticalLine) {
  const std::vector<Eigen::Vector2d> points = {{5, 0}, {5, 1}, {5, 2}};
  const LineFit fit = FitLine(points);
  EXPECT_NEAR(fit.sse, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(fit.normal.x()), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(fit.offset), 5.0, 1e-12);
}

TEST(FitLine, AgreesWithBruteForceOnRandomClouds) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Eigen::Vector2d> points;
    const double a = n(rng);
    for (int i = 0; i < 25; ++i) {
      const double s = 10.0 * n(rng);
      points.emplace_back(s * std::cos(a) + n(rng), s * std::sin(a) + n(rng));
    }
    EXPECT_NEAR(FitLine(points).sse, testing::BruteForceLineSse(points), 1e-7);
  }
}

TEST(FitLine, InvariantToPermutationAndRigidMotion) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Eigen::Vector2d> points;
  for (int i = 0; i < 30; ++i) points.emplace_back(20.0 * n(rng), 5.0 * n(rng));
  const double sse = FitLine(points).sse;
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(points.begin(), points.end(), rng);
    EXPECT_NEAR(FitLine(points).sse, sse, 1e-9);
    const Eigen::Rotation2Dd rot(n(rng));
    const Eigen::Vector2d shift(100.0 * n(rng), 100.0 * n(rng));
    std::vector<Eigen::Vector2d> moved;
    for (const auto& p : points) moved.push_back(rot * p + shift);
    EXPECT_NEAR(FitLine(moved).sse, sse, 1e-9);
  }
}

TEST(FitLine, DegenerateInput) {
  EXPECT_EQ(CodeOf([] { FitLine(std::vector<Eigen::Vector2d>{{1, 1}}); }),
            ErrorCode::kDegeneratePoints);
  EXPECT_EQ(CodeOf([] { FitLine(std::vector<Eigen::Vector2d>{{1, 1}, {1, 1}, {1, 1}}); }),
            ErrorCode::kDegeneratePoints);
}

}  // namespace
}  // namespace autocalib
