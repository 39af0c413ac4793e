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
// Top-view rectification of the ground plane. Every output cell covers a
// square patch of the Z = 0 plane; the remap grid stores, per cell, where
// that patch appears in the original (distorted) camera image.

#ifndef AUTOCALIB_TOPVIEW_H_
#define AUTOCALIB_TOPVIEW_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "autocalib/geometry.h"
#include "autocalib/json_io.h"

namespace autocalib {

// Ground window in units of the camera height, sampled at `resolution`
// output pixels per unit. Output column j grows with X, row i shrinks with Y.
struct TopviewSpec {
  double x_min = -2.0;
  double x_max = 2.0;
  double y_min = -2.0;
  double y_max = 2.0;
  double resolution = 100.0;

  int cols() const;
  int rows() const;
  GroundPoint CellCenter(int row, int col) const;
  // Fractional (col, row) of a ground point; cell centers land on integers.
  Eigen::Vector2d CellOf(GroundPoint g) const;
};

// Throws kInvalidArgument for an empty extent or non-positive resolution.
void ValidateTopviewSpec(const TopviewSpec& spec);
Json TopviewSpecToJson(const TopviewSpec& spec);
TopviewSpec TopviewSpecFromJson(const Json& document);

// How rectilinear pixels are mapped back into the source image: the
// equidistant model at the calibrated focal length, or the inverse of the
// fitted polynomial.
enum class SourceModel { kEquidistant, kPolynomial };

struct TopviewCamera {
  Intrinsics distorted;  // focal length of the fisheye stage
  Intrinsics rectified;  // focal length the pose was estimated with
  DistortionCoefficients coefficients;
  Pose pose;
  SourceModel model = SourceModel::kEquidistant;

  // Camera height implied by the pose, i.e. the Z of the camera center.
  double Height() const;
  // Ground (height units) to the homogeneous rectilinear pixel.
  Eigen::Matrix3d Homography() const;
};

struct RemapGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> src_u;
  std::vector<double> src_v;
  std::vector<std::uint8_t> valid;

  std::size_t Index(int row, int col) const {
    return static_cast<std::size_t>(row) * cols + col;
  }
  std::size_t ValidCount() const;
};

// Cells that are behind the camera, beyond the model's field of view or
// outside the source image are invalid. Throws kDegenerateHomography.
RemapGrid TopviewGrid(const TopviewCamera& camera, const TopviewSpec& spec);

// Fractional (col, row) of the cell a source pixel shows, or nullopt when
// the pixel is on or above the horizon.
std::optional<Eigen::Vector2d> SourceToTopview(const TopviewCamera& camera,
                                               const TopviewSpec& spec,
                                               PixelPoint source);

Json RemapGridToJson(const RemapGrid& grid);
// Little-endian: "ACRG", int32 rows, int32 cols, then per cell
// float64 src_u, float64 src_v, uint8 valid.
void WriteRemapGridBinary(const RemapGrid& grid, const std::filesystem::path& path);
RemapGrid ReadRemapGridBinary(const std::filesystem::path& path);

// 8-bit interleaved image, rows top to bottom.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

enum class Interpolation { kNearest, kBilinear };

// Invalid cells, and cells whose sample falls outside the image, are black.
Image ApplyRemap(const RemapGrid& grid, const Image& source,
                 Interpolation interpolation = Interpolation::kBilinear);

}  // namespace autocalib

#endif  // AUTOCALIB_TOPVIEW_H_
