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

#ifndef AUTOCALIB_ERROR_H_
#define AUTOCALIB_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace autocalib {

// Every failure the library reports. The names are stable: the CLI writes
// them verbatim into its error JSON.
enum class ErrorCode {
  kInvalidArgument,
  kNonPositiveDepth,
  kBeyondHemisphere,
  kDegenerateHomography,
  kPointAtHorizon,
  kParseError,
  kSchemaVersionMismatch,
  kDegeneratePoints,
  kNoTracks,
  kDegenerateObjective,
  kRankDeficient,
  kUnimodal,
  kEmptyCluster,
  kEmptyGrid,
  kInconsistentVPs,
  kParallelVPs,
  kSingularInput,
  kHorizontalCamera,
  kCameraSeesNothing,
  kConfigError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  // The message without the code prefix that what() carries.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace autocalib

#endif  // AUTOCALIB_ERROR_H_
