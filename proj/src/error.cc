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

#include "autocalib/error.h"

namespace autocalib {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::kBeyondHemisphere: return "BeyondHemisphere";
    case ErrorCode::kDegenerateHomography: return "DegenerateHomography";
    case ErrorCode::kPointAtHorizon: return "PointAtHorizon";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kDegeneratePoints: return "DegeneratePoints";
    case ErrorCode::kNoTracks: return "NoTracks";
    case ErrorCode::kDegenerateObjective: return "DegenerateObjective";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kUnimodal: return "Unimodal";
    case ErrorCode::kEmptyCluster: return "EmptyCluster";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kInconsistentVPs: return "InconsistentVPs";
    case ErrorCode::kParallelVPs: return "ParallelVPs";
    case ErrorCode::kSingularInput: return "SingularInput";
    case ErrorCode::kHorizontalCamera: return "HorizontalCamera";
    case ErrorCode::kCameraSeesNothing: return "CameraSeesNothing";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace autocalib
