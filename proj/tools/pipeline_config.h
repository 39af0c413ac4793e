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
// The command-line pipeline configuration: one JSON file, every tunable
// constant named, defaults equal to the published values.

#ifndef AUTOCALIB_TOOLS_PIPELINE_CONFIG_H_
#define AUTOCALIB_TOOLS_PIPELINE_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>

#include "autocalib/extrinsics.h"
#include "autocalib/intrinsics.h"
#include "autocalib/json_io.h"
#include "autocalib/oracle.h"
#include "autocalib/topview.h"

namespace autocalib {

struct PipelineConfig {
  // Inputs. Empty paths default to the stable file names inside output_dir.
  std::filesystem::path tracks;
  std::filesystem::path segments;
  std::filesystem::path intrinsics;
  std::filesystem::path extrinsics;
  std::filesystem::path truth;
  std::filesystem::path image;  // optional source frame for the top view
  std::filesystem::path output_dir = ".";

  std::optional<double> height;  // camera height above the ground

  IntrinsicConfig intrinsic;
  ExtrinsicConfig extrinsic;
  // Unset means the stride recorded in the segments file.
  std::optional<int> stride;
  bool dump_votes = false;

  SceneSpec scene;

  TopviewSpec topview;
  SourceModel topview_model = SourceModel::kEquidistant;
  Interpolation interpolation = Interpolation::kBilinear;
  std::string grid_format = "binary";  // "binary" or "json"
};

// Missing keys keep their defaults; unknown keys and wrong types throw
// kConfigError.
PipelineConfig PipelineConfigFromJson(const Json& document);
Json PipelineConfigToJson(const PipelineConfig& config);

// Range checks shared by every subcommand. Throws kConfigError.
void ValidatePipelineConfig(const PipelineConfig& config);

}  // namespace autocalib

#endif  // AUTOCALIB_TOOLS_PIPELINE_CONFIG_H_
