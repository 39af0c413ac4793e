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
#include "cli.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "autocalib/error.h"
#include "autocalib/extrinsics.h"
#include "autocalib/intrinsics.h"
#include "autocalib/json_io.h"
#include "autocalib/oracle.h"
#include "autocalib/topview.h"
#include "autocalib/tracks.h"
#include "pipeline_config.h"
#include "png_io.h"

namespace autocalib {
namespace {

namespace fs = std::filesystem;

constexpr char kTracksFile[] = "tracks.json";
constexpr char kSegmentsFile[] = "segments.json";
constexpr char kTruthFile[] = "truth.json";
constexpr char kSceneFile[] = "scene.json";
constexpr char kIntrinsicsFile[] = "intrinsics.json";
constexpr char kExtrinsicsFile[] = "extrinsics.json";
constexpr char kReportFile[] = "report.json";
constexpr char kTopviewFile[] = "topview.json";
constexpr char kErrorFile[] = "error.json";

// Flag values are applied on top of the config file, so each flag keeps its
// own storage and only overrides when it was given.
class Overrides {
 public:
  template <typename T, typename Access>
  CLI::Option* Add(CLI::App* app, const std::string& name, Access access,
                   const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* option = app->add_option(name, *value, help);
    apply_.push_back([option, value, access](PipelineConfig& c) {
      if (option->count() > 0) access(c) = *value;
    });
    return option;
  }

  template <typename Access>
  void AddFlag(CLI::App* app, const std::string& name, Access access, bool set_to,
               const std::string& help) {
    CLI::Option* option = app->add_flag(name, help);
    apply_.push_back([option, access, set_to](PipelineConfig& c) {
      if (option->count() > 0) access(c) = set_to;
    });
  }

  void Apply(PipelineConfig& config) const {
    for (const auto& f : apply_) f(config);
  }

 private:
  std::vector<std::function<void(PipelineConfig&)>> apply_;
};

struct Context {
  PipelineConfig config;
  std::string stage = "config";
};

fs::path InputPath(const PipelineConfig& c, const fs::path& given, const char* stable) {
  return given.empty() ? c.output_dir / stable : given;
}

void WriteJson(const PipelineConfig& c, const char* name, const Json& value) {
  const fs::path path = c.output_dir / name;
  WriteTextFile(path, DumpJson(value));
  spdlog::info("wrote {}", path.string());
}

double RequireHeight(const PipelineConfig& c) {
  if (!c.height) {
    throw Error(ErrorCode::kConfigError,
                "the extrinsic stage needs the camera height (--height or \"height\")");
  }
  return *c.height;
}

Image VoteImage(const VoteGrid& grid) {
  Image image;
  image.width = grid.width();
  image.height = grid.height();
  image.channels = 1;
  image.pixels.resize(static_cast<std::size_t>(grid.width()) * grid.height());
  const auto counts = grid.counts();
  const std::uint32_t peak = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  const double scale = peak > 0 ? 255.0 / std::log1p(static_cast<double>(peak)) : 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    image.pixels[i] = static_cast<std::uint8_t>(std::lround(scale * std::log1p(counts[i])));
  }
  return image;
}

IntrinsicResult RunIntrinsic(Context& ctx) {
  ctx.stage = "intrinsic";
  const PipelineConfig& c = ctx.config;
  const TrackSet tracks = LoadTracks(InputPath(c, c.tracks, kTracksFile));
  spdlog::info("intrinsic: {} tracks", tracks.tracks.size());
  IntrinsicResult result = CalibrateIntrinsics(tracks, c.intrinsic);
  spdlog::info("intrinsic: f = {:.3f}, k = ({:.6f}, {:.6f}, {:.6f})", result.intrinsics.focal(),
               result.coefficients.k1, result.coefficients.k2, result.coefficients.k3);
  WriteJson(c, kIntrinsicsFile, IntrinsicResultToJson(result));
  return result;
}

void RunExtrinsic(Context& ctx, const IntrinsicResult* intrinsic) {
  ctx.stage = "extrinsic";
  const PipelineConfig& c = ctx.config;
  const double height = RequireHeight(c);
  const IntrinsicResult loaded =
      intrinsic ? *intrinsic
                : IntrinsicResultFromJson(
                      ReadJsonFile(InputPath(c, c.intrinsics, kIntrinsicsFile)));
  const SegmentSet segments = LoadSegments(InputPath(c, c.segments, kSegmentsFile));
  ExtrinsicConfig config = c.extrinsic;
  config.segments.stride = c.stride.value_or(segments.stride);
  spdlog::info("extrinsic: {} matches, stride {}", segments.matches.size(),
               config.segments.stride);

  std::vector<VoteGrid> grids;
  const ExtrinsicResult result =
      CalibrateExtrinsics(segments, loaded, height, config, c.dump_votes ? &grids : nullptr);
  spdlog::info("extrinsic: f_new = {:.3f}, vp_x = ({:.1f}, {:.1f}), vp_y = ({:.1f}, {:.1f})",
               result.f_new, result.vp_x.u, result.vp_x.v, result.vp_y.u, result.vp_y.v);
  WriteJson(c, kExtrinsicsFile, ExtrinsicResultToJson(result));
  if (c.dump_votes) {
    const char* names[2] = {"votes_x.png", "votes_y.png"};
    for (std::size_t i = 0; i < grids.size() && i < 2; ++i) {
      WritePng(c.output_dir / names[i], VoteImage(grids[i]));
      spdlog::info("wrote {}", (c.output_dir / names[i]).string());
    }
  }
}

void RunSimulate(Context& ctx) {
  ctx.stage = "simulate";
  const PipelineConfig& c = ctx.config;
  const GeneratedScene scene = GenerateScene(c.scene);
  if (scene.degenerate) spdlog::warn("simulate: a vanishing point is at infinity");
  spdlog::info("simulate: {} tracks, {} matches", scene.tracks.tracks.size(),
               scene.segments.matches.size());
  WriteJson(c, kSceneFile, SceneSpecToJson(c.scene));
  WriteJson(c, kTracksFile, TracksToJson(scene.tracks));
  WriteJson(c, kSegmentsFile, SegmentsToJson(scene.segments));
  WriteJson(c, kTruthFile, GroundTruthToJson(scene.truth));
}

void RunEvaluate(Context& ctx) {
  ctx.stage = "evaluate";
  const PipelineConfig& c = ctx.config;
  const GroundTruth truth = GroundTruthFromJson(ReadJsonFile(InputPath(c, c.truth, kTruthFile)));
  const IntrinsicResult intrinsic =
      IntrinsicResultFromJson(ReadJsonFile(InputPath(c, c.intrinsics, kIntrinsicsFile)));
  const fs::path extrinsic_path = InputPath(c, c.extrinsics, kExtrinsicsFile);
  std::optional<ExtrinsicResult> extrinsic;
  if (!c.extrinsics.empty() || fs::exists(extrinsic_path)) {
    extrinsic = ExtrinsicResultFromJson(ReadJsonFile(extrinsic_path));
  }
  const RecoveryReport report =
      EvaluateRecovery(truth, intrinsic, extrinsic ? &*extrinsic : nullptr);
  spdlog::info("evaluate: focal error {:.3f}%", report.focal_error_pct);
  WriteJson(c, kReportFile, RecoveryReportToJson(report));
}

void RunTopview(Context& ctx) {
  ctx.stage = "topview";
  const PipelineConfig& c = ctx.config;
  const IntrinsicResult intrinsic =
      IntrinsicResultFromJson(ReadJsonFile(InputPath(c, c.intrinsics, kIntrinsicsFile)));
  const ExtrinsicResult extrinsic =
      ExtrinsicResultFromJson(ReadJsonFile(InputPath(c, c.extrinsics, kExtrinsicsFile)));
  const Intrinsics& K = intrinsic.intrinsics;
  const TopviewCamera camera{K, Intrinsics(extrinsic.f_new, K.width(), K.height()),
                             intrinsic.coefficients, extrinsic.pose, c.topview_model};
  const RemapGrid grid = TopviewGrid(camera, c.topview);
  spdlog::info("topview: {}x{} cells, {} valid", grid.cols, grid.rows, grid.ValidCount());

  fs::path grid_file;
  if (c.grid_format == "json") {
    grid_file = "topview_grid.json";
    WriteJson(c, "topview_grid.json", RemapGridToJson(grid));
  } else {
    grid_file = "topview_grid.bin";
    WriteRemapGridBinary(grid, c.output_dir / grid_file);
    spdlog::info("wrote {}", (c.output_dir / grid_file).string());
  }
  Json meta = {{"spec", TopviewSpecToJson(c.topview)},
               {"rows", grid.rows},
               {"cols", grid.cols},
               {"valid_cells", grid.ValidCount()},
               {"model", c.topview_model == SourceModel::kEquidistant ? "equidistant" : "polynomial"},
               {"grid", grid_file.string()}};
  if (!c.image.empty()) {
    const Image warped = ApplyRemap(grid, ReadPng(c.image), c.interpolation);
    WritePng(c.output_dir / "topview.png", warped);
    spdlog::info("wrote {}", (c.output_dir / "topview.png").string());
    meta["image"] = "topview.png";
  }
  WriteJson(c, kTopviewFile, meta);
}

void AddIntrinsicFlags(CLI::App* app, Overrides& o) {
  o.Add<std::string>(app, "--tracks", [](PipelineConfig& c) -> fs::path& { return c.tracks; },
                     "trajectory file (default: <out>/tracks.json)");
  o.Add<double>(app, "--coverage-min",
                [](PipelineConfig& c) -> double& { return c.intrinsic.filter.coverage_min; },
                "minimum fraction of the clip a track must span");
  o.Add<double>(app, "--tortuosity-max",
                [](PipelineConfig& c) -> double& { return c.intrinsic.filter.tortuosity_max; },
                "maximum path length over displacement");
  o.Add<int>(app, "--calibration-tracks",
             [](PipelineConfig& c) -> int& { return c.intrinsic.calibration_tracks; },
             "number of longest tracks used for the focal search");
  o.Add<double>(app, "--f-min", [](PipelineConfig& c) -> double& { return c.intrinsic.search.f_min; },
                "lower end of the focal search");
  o.Add<double>(app, "--f-max", [](PipelineConfig& c) -> double& { return c.intrinsic.search.f_max; },
                "upper end of the focal search (<= 0: image diagonal)");
  o.Add<double>(app, "--f-step", [](PipelineConfig& c) -> double& { return c.intrinsic.search.step; },
                "focal search grid step in pixels");
  o.AddFlag(app, "--no-refine", [](PipelineConfig& c) -> bool& { return c.intrinsic.search.refine; },
            false, "skip the golden-section refinement");
}

void AddExtrinsicFlags(CLI::App* app, Overrides& o) {
  o.Add<std::string>(app, "--segments",
                     [](PipelineConfig& c) -> fs::path& { return c.segments; },
                     "segment file (default: <out>/segments.json)");
  o.Add<double>(app, "--height", [](PipelineConfig& c) -> std::optional<double>& { return c.height; },
                "camera height above the ground plane (required)");
  o.Add<int>(app, "--stride", [](PipelineConfig& c) -> std::optional<int>& { return c.stride; },
             "frame gap of a match (default: the segment file's)");
  o.Add<double>(app, "--min-length",
                [](PipelineConfig& c) -> double& { return c.extrinsic.segments.min_length; },
                "shortest undistorted segment kept, pixels");
  o.Add<double>(app, "--bin-width",
                [](PipelineConfig& c) -> double& { return c.extrinsic.peaks.bin_width; },
                "orientation histogram bin width, degrees");
  o.Add<double>(app, "--min-separation",
                [](PipelineConfig& c) -> double& { return c.extrinsic.peaks.min_separation; },
                "minimum angle between the two peaks, degrees");
  o.Add<double>(app, "--secondary-ratio",
                [](PipelineConfig& c) -> double& { return c.extrinsic.peaks.secondary_ratio; },
                "second peak must reach this fraction of the first");
  o.Add<double>(app, "--cluster-half-width",
                [](PipelineConfig& c) -> double& { return c.extrinsic.cluster_half_width; },
                "segments within this many degrees of a peak vote");
  o.Add<double>(app, "--top-fraction",
                [](PipelineConfig& c) -> double& { return c.extrinsic.top_fraction; },
                "cells within this fraction of the maximum vote form the VP cloud");
  o.Add<double>(app, "--k-sigma", [](PipelineConfig& c) -> double& { return c.extrinsic.k_sigma; },
                "shift of the VP along the cloud axis, in standard deviations");
  o.Add<double>(app, "--grid-extent",
                [](PipelineConfig& c) -> double& { return c.extrinsic.grid.extent_factor; },
                "vote grid size as a multiple of the image");
  o.Add<int>(app, "--grid-downscale",
             [](PipelineConfig& c) -> int& { return c.extrinsic.grid.downscale; },
             "pixels per vote cell");
  o.AddFlag(app, "--dump-votes", [](PipelineConfig& c) -> bool& { return c.dump_votes; }, true,
            "write the two vote maps as PNG");
}

void AddSceneFlags(CLI::App* app, Overrides& o) {
  o.Add<std::uint64_t>(app, "--seed", [](PipelineConfig& c) -> std::uint64_t& { return c.scene.seed; },
                       "random seed");
  o.Add<double>(app, "--sigma", [](PipelineConfig& c) -> double& { return c.scene.noise_sigma; },
                "pixel noise standard deviation");
  o.Add<double>(app, "--focal", [](PipelineConfig& c) -> double& { return c.scene.focal; },
                "true focal length, pixels");
  o.Add<int>(app, "--image-width", [](PipelineConfig& c) -> int& { return c.scene.width; },
             "image width, pixels");
  o.Add<int>(app, "--image-height", [](PipelineConfig& c) -> int& { return c.scene.height; },
             "image height, pixels");
  o.Add<double>(app, "--yaw", [](PipelineConfig& c) -> double& { return c.scene.yaw_deg; },
                "camera heading, degrees");
  o.Add<double>(app, "--pitch", [](PipelineConfig& c) -> double& { return c.scene.pitch_deg; },
                "camera depression below the horizon, degrees");
  o.Add<double>(app, "--roll", [](PipelineConfig& c) -> double& { return c.scene.roll_deg; },
                "camera roll, degrees");
  o.Add<double>(app, "--camera-height",
                [](PipelineConfig& c) -> double& { return c.scene.camera_height; },
                "true camera height");
}

void AddTopviewFlags(CLI::App* app, Overrides& o) {
  o.Add<std::string>(app, "--image", [](PipelineConfig& c) -> fs::path& { return c.image; },
                     "PNG frame to warp into topview.png");
  o.Add<double>(app, "--x-min", [](PipelineConfig& c) -> double& { return c.topview.x_min; },
                "ground window, camera heights (default -2)");
  o.Add<double>(app, "--x-max", [](PipelineConfig& c) -> double& { return c.topview.x_max; },
                "(default 2)");
  o.Add<double>(app, "--y-min", [](PipelineConfig& c) -> double& { return c.topview.y_min; },
                "(default -2)");
  o.Add<double>(app, "--y-max", [](PipelineConfig& c) -> double& { return c.topview.y_max; },
                "(default 2)");
  o.Add<double>(app, "--resolution",
                [](PipelineConfig& c) -> double& { return c.topview.resolution; },
                "output pixels per camera height (default 100)");
  o.Add<std::string>(app, "--grid-format",
                     [](PipelineConfig& c) -> std::string& { return c.grid_format; },
                     "binary or json")
      ->check(CLI::IsMember({"binary", "json"}));
  o.Add<SourceModel>(app, "--model", [](PipelineConfig& c) -> SourceModel& { return c.topview_model; },
                     "equidistant or polynomial")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, SourceModel>{{"equidistant", SourceModel::kEquidistant},
                                             {"polynomial", SourceModel::kPolynomial}})
                     .description("{equidistant,polynomial}"))
      ->type_name("TEXT");
  o.Add<Interpolation>(app, "--interpolation",
                       [](PipelineConfig& c) -> Interpolation& { return c.interpolation; },
                       "nearest or bilinear")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Interpolation>{{"nearest", Interpolation::kNearest},
                                               {"bilinear", Interpolation::kBilinear}})
                     .description("{nearest,bilinear}"))
      ->type_name("TEXT");
}

void SetUpLogging(const std::string& level) {
  auto sink = std::make_shared<spdlog::sinks::stderr_color_sink_st>();
  auto logger = std::make_shared<spdlog::logger>("autocalib", std::move(sink));
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  spdlog::cfg::load_env_levels();  // SPDLOG_LEVEL=debug etc.
  if (!level.empty()) spdlog::set_level(spdlog::level::from_str(level));
}

void ReportFailure(const Context& ctx, const std::string& code, const std::string& message) {
  spdlog::error("{} stage failed: {}", ctx.stage, message);
  const Json error = {{"error", code}, {"stage", ctx.stage}, {"message", message}};
  try {
    fs::create_directories(ctx.config.output_dir);
    WriteTextFile(ctx.config.output_dir / kErrorFile, DumpJson(error));
  } catch (const std::exception& e) {
    spdlog::error("could not write {}: {}", kErrorFile, e.what());
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"Automatic fisheye traffic-camera calibration from vehicle motion"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand help for every subcommand");

  std::string config_path;
  std::string output_dir;
  std::string log_level;
  Overrides overrides;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "pipeline configuration JSON");
    sub->add_option("-o,--out", output_dir, "output directory (default: .)");
    sub->add_option("--log-level", log_level, "trace, debug, info, warn, error, off");
  };

  CLI::App* intrinsic = app.add_subcommand("intrinsic", "tracks -> intrinsics.json");
  CLI::App* extrinsic = app.add_subcommand("extrinsic", "segments + intrinsics -> extrinsics.json");
  CLI::App* calibrate = app.add_subcommand("calibrate", "both stages");
  CLI::App* simulate = app.add_subcommand("simulate", "synthetic scene -> tracks, segments, truth");
  CLI::App* evaluate = app.add_subcommand("evaluate", "truth + results -> report.json");
  CLI::App* topview = app.add_subcommand("topview", "calibration -> top-view remap grid");
  for (CLI::App* sub : {intrinsic, extrinsic, calibrate, simulate, evaluate, topview}) common(sub);

  AddIntrinsicFlags(intrinsic, overrides);
  AddExtrinsicFlags(extrinsic, overrides);
  AddIntrinsicFlags(calibrate, overrides);
  AddExtrinsicFlags(calibrate, overrides);
  AddSceneFlags(simulate, overrides);
  AddTopviewFlags(topview, overrides);
  const auto intrinsics_flag = [&](CLI::App* sub) {
    overrides.Add<std::string>(sub, "--intrinsics",
                               [](PipelineConfig& c) -> fs::path& { return c.intrinsics; },
                               "intrinsic result (default: <out>/intrinsics.json)");
  };
  const auto extrinsics_flag = [&](CLI::App* sub) {
    overrides.Add<std::string>(sub, "--extrinsics",
                               [](PipelineConfig& c) -> fs::path& { return c.extrinsics; },
                               "extrinsic result (default: <out>/extrinsics.json)");
  };
  intrinsics_flag(extrinsic);
  intrinsics_flag(evaluate);
  intrinsics_flag(topview);
  extrinsics_flag(evaluate);
  extrinsics_flag(topview);
  overrides.Add<std::string>(evaluate, "--truth",
                             [](PipelineConfig& c) -> fs::path& { return c.truth; },
                             "ground truth (default: <out>/truth.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  SetUpLogging(log_level);
  Context ctx;
  if (!output_dir.empty()) ctx.config.output_dir = output_dir;  // so a bad config still reports
  try {
    if (!config_path.empty()) ctx.config = PipelineConfigFromJson(ReadJsonFile(config_path));
    overrides.Apply(ctx.config);
    if (!output_dir.empty()) ctx.config.output_dir = output_dir;
    ValidatePipelineConfig(ctx.config);
    fs::create_directories(ctx.config.output_dir);

    if (intrinsic->parsed()) {
      RunIntrinsic(ctx);
    } else if (extrinsic->parsed()) {
      RunExtrinsic(ctx, nullptr);
    } else if (calibrate->parsed()) {
      RequireHeight(ctx.config);
      const IntrinsicResult result = RunIntrinsic(ctx);
      RunExtrinsic(ctx, &result);
    } else if (simulate->parsed()) {
      RunSimulate(ctx);
    } else if (evaluate->parsed()) {
      RunEvaluate(ctx);
    } else if (topview->parsed()) {
      RunTopview(ctx);
    }
  } catch (const Error& e) {
    ReportFailure(ctx, std::string(ErrorCodeName(e.code())), e.detail());
    return e.code() == ErrorCode::kConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    ReportFailure(ctx, "Internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace autocalib
