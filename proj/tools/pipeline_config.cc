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
#include "pipeline_config.h"

#include <cmath>
#include <initializer_list>
#include <set>

#include "autocalib/error.h"

namespace autocalib {
namespace {

[[noreturn]] void Fail(const std::string& what) {
  throw Error(ErrorCode::kConfigError, what);
}

void RejectUnknown(const Json& section, const std::string& name,
                   std::initializer_list<const char*> known) {
  if (!section.is_object()) Fail(name + ": expected an object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : section.items()) {
    if (!allowed.contains(item.key())) Fail(name + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
void Read(const Json& section, const char* key, T* out) {
  if (section.contains(key)) *out = section.at(key).get<T>();
}

void ReadPath(const Json& section, const char* key, std::filesystem::path* out) {
  if (section.contains(key)) *out = section.at(key).get<std::string>();
}

const char* ModelName(SourceModel model) {
  return model == SourceModel::kEquidistant ? "equidistant" : "polynomial";
}

const char* InterpolationName(Interpolation interpolation) {
  return interpolation == Interpolation::kNearest ? "nearest" : "bilinear";
}

void ReadIntrinsic(const Json& s, IntrinsicConfig* c) {
  RejectUnknown(s, "intrinsic", {"coverage_min", "tortuosity_max", "calibration_tracks",
                                 "f_min", "f_max", "f_step", "refine"});
  Read(s, "coverage_min", &c->filter.coverage_min);
  Read(s, "tortuosity_max", &c->filter.tortuosity_max);
  Read(s, "calibration_tracks", &c->calibration_tracks);
  Read(s, "f_min", &c->search.f_min);
  Read(s, "f_max", &c->search.f_max);
  Read(s, "f_step", &c->search.step);
  Read(s, "refine", &c->search.refine);
}

void ReadExtrinsic(const Json& s, PipelineConfig* c) {
  RejectUnknown(s, "extrinsic",
                {"stride", "min_length", "bin_width", "min_separation", "secondary_ratio",
                 "cluster_half_width", "top_fraction", "k_sigma", "grid_extent",
                 "grid_downscale", "dump_votes"});
  ExtrinsicConfig& e = c->extrinsic;
  if (s.contains("stride") && !s.at("stride").is_null()) c->stride = s.at("stride").get<int>();
  Read(s, "min_length", &e.segments.min_length);
  Read(s, "bin_width", &e.peaks.bin_width);
  Read(s, "min_separation", &e.peaks.min_separation);
  Read(s, "secondary_ratio", &e.peaks.secondary_ratio);
  Read(s, "cluster_half_width", &e.cluster_half_width);
  Read(s, "top_fraction", &e.top_fraction);
  Read(s, "k_sigma", &e.k_sigma);
  Read(s, "grid_extent", &e.grid.extent_factor);
  Read(s, "grid_downscale", &e.grid.downscale);
  Read(s, "dump_votes", &c->dump_votes);
}

void ReadTopview(const Json& s, PipelineConfig* c) {
  RejectUnknown(s, "topview", {"x_min", "x_max", "y_min", "y_max", "resolution", "model",
                               "interpolation", "grid_format"});
  Json spec = s;
  for (const char* key : {"model", "interpolation", "grid_format"}) spec.erase(key);
  c->topview = TopviewSpecFromJson(spec);
  if (s.contains("model")) {
    const auto name = s.at("model").get<std::string>();
    if (name == "equidistant") c->topview_model = SourceModel::kEquidistant;
    else if (name == "polynomial") c->topview_model = SourceModel::kPolynomial;
    else Fail("topview.model must be 'equidistant' or 'polynomial'");
  }
  if (s.contains("interpolation")) {
    const auto name = s.at("interpolation").get<std::string>();
    if (name == "nearest") c->interpolation = Interpolation::kNearest;
    else if (name == "bilinear") c->interpolation = Interpolation::kBilinear;
    else Fail("topview.interpolation must be 'nearest' or 'bilinear'");
  }
  Read(s, "grid_format", &c->grid_format);
}

}  // namespace

PipelineConfig PipelineConfigFromJson(const Json& document) {
  PipelineConfig config;
  try {
    RejectUnknown(document, "config",
                  {"tracks", "segments", "intrinsics", "extrinsics", "truth", "image",
                   "output_dir", "height", "intrinsic", "extrinsic", "scene", "topview"});
    ReadPath(document, "tracks", &config.tracks);
    ReadPath(document, "segments", &config.segments);
    ReadPath(document, "intrinsics", &config.intrinsics);
    ReadPath(document, "extrinsics", &config.extrinsics);
    ReadPath(document, "truth", &config.truth);
    ReadPath(document, "image", &config.image);
    ReadPath(document, "output_dir", &config.output_dir);
    if (document.contains("height") && !document.at("height").is_null()) {
      config.height = document.at("height").get<double>();
    }
    if (document.contains("intrinsic")) ReadIntrinsic(document.at("intrinsic"), &config.intrinsic);
    if (document.contains("extrinsic")) ReadExtrinsic(document.at("extrinsic"), &config);
    if (document.contains("scene")) config.scene = SceneSpecFromJson(document.at("scene"));
    if (document.contains("topview")) ReadTopview(document.at("topview"), &config);
  } catch (const Json::exception& e) {
    Fail(std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    Fail(e.what());
  }
  return config;
}

Json PipelineConfigToJson(const PipelineConfig& c) {
  const IntrinsicConfig& i = c.intrinsic;
  const ExtrinsicConfig& e = c.extrinsic;
  Json topview = TopviewSpecToJson(c.topview);
  topview["model"] = ModelName(c.topview_model);
  topview["interpolation"] = InterpolationName(c.interpolation);
  topview["grid_format"] = c.grid_format;
  return {{"tracks", c.tracks.string()},
          {"segments", c.segments.string()},
          {"intrinsics", c.intrinsics.string()},
          {"extrinsics", c.extrinsics.string()},
          {"truth", c.truth.string()},
          {"image", c.image.string()},
          {"output_dir", c.output_dir.string()},
          {"height", c.height ? Json(*c.height) : Json(nullptr)},
          {"intrinsic",
           {{"coverage_min", i.filter.coverage_min},
            {"tortuosity_max", i.filter.tortuosity_max},
            {"calibration_tracks", i.calibration_tracks},
            {"f_min", i.search.f_min},
            {"f_max", i.search.f_max},
            {"f_step", i.search.step},
            {"refine", i.search.refine}}},
          {"extrinsic",
           {{"stride", c.stride ? Json(*c.stride) : Json(nullptr)},
            {"min_length", e.segments.min_length},
            {"bin_width", e.peaks.bin_width},
            {"min_separation", e.peaks.min_separation},
            {"secondary_ratio", e.peaks.secondary_ratio},
            {"cluster_half_width", e.cluster_half_width},
            {"top_fraction", e.top_fraction},
            {"k_sigma", e.k_sigma},
            {"grid_extent", e.grid.extent_factor},
            {"grid_downscale", e.grid.downscale},
            {"dump_votes", c.dump_votes}}},
          {"scene", SceneSpecToJson(c.scene)},
          {"topview", std::move(topview)}};
}

void ValidatePipelineConfig(const PipelineConfig& c) {
  const IntrinsicConfig& i = c.intrinsic;
  const ExtrinsicConfig& e = c.extrinsic;
  const auto require = [](bool ok, const char* what) {
    if (!ok) Fail(what);
  };
  require(i.filter.coverage_min >= 0.0 && i.filter.coverage_min <= 1.0,
          "coverage_min must be in [0, 1]");
  require(i.filter.tortuosity_max >= 1.0, "tortuosity_max must be >= 1");
  require(i.calibration_tracks >= 1, "calibration_tracks must be >= 1");
  require(i.search.f_min > 0.0, "f_min must be > 0");
  require(i.search.step > 0.0, "f_step must be > 0");
  require(i.search.f_max <= 0.0 || i.search.f_max > i.search.f_min, "f_max must exceed f_min");
  require(!c.stride || *c.stride >= 1, "stride must be >= 1");
  require(e.segments.min_length >= 0.0, "min_length must be >= 0");
  require(e.peaks.bin_width > 0.0 && e.peaks.bin_width <= 90.0, "bin_width must be in (0, 90]");
  require(e.peaks.min_separation >= 0.0 && e.peaks.min_separation <= 90.0,
          "min_separation must be in [0, 90]");
  require(e.peaks.secondary_ratio >= 0.0 && e.peaks.secondary_ratio <= 1.0,
          "secondary_ratio must be in [0, 1]");
  require(e.cluster_half_width > 0.0 && e.cluster_half_width <= 90.0,
          "cluster_half_width must be in (0, 90]");
  require(e.top_fraction > 0.0 && e.top_fraction <= 1.0, "top_fraction must be in (0, 1]");
  require(e.k_sigma >= 0.0 && e.k_sigma <= 3.0, "k_sigma must be in [0, 3]");
  require(e.grid.extent_factor >= 1.0, "grid_extent must be >= 1");
  require(e.grid.downscale >= 1, "grid_downscale must be >= 1");
  require(!c.height || (*c.height > 0.0 && std::isfinite(*c.height)), "height must be > 0");
  require(c.grid_format == "binary" || c.grid_format == "json",
          "grid_format must be 'binary' or 'json'");
}

}  // namespace autocalib
