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
#include "autocalib/topview.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <Eigen/LU>

#include "autocalib/error.h"
#include "parallel.h"

namespace autocalib {
namespace {

constexpr char kGridMagic[4] = {'A', 'C', 'R', 'G'};
// Homogeneous scales below this (relative to the vector) are at the horizon.
constexpr double kHorizonTolerance = 1e-9;

static_assert(std::endian::native == std::endian::little,
              "binary grid I/O assumes a little-endian host");

template <typename T>
void Put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T Take(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

int TopviewSpec::cols() const {
  return static_cast<int>(std::ceil((x_max - x_min) * resolution - 1e-9));
}

int TopviewSpec::rows() const {
  return static_cast<int>(std::ceil((y_max - y_min) * resolution - 1e-9));
}

GroundPoint TopviewSpec::CellCenter(int row, int col) const {
  return {x_min + (col + 0.5) / resolution, y_max - (row + 0.5) / resolution};
}

Eigen::Vector2d TopviewSpec::CellOf(GroundPoint g) const {
  return {(g.x - x_min) * resolution - 0.5, (y_max - g.y) * resolution - 0.5};
}

void ValidateTopviewSpec(const TopviewSpec& spec) {
  const bool finite = std::isfinite(spec.x_min) && std::isfinite(spec.x_max) &&
                      std::isfinite(spec.y_min) && std::isfinite(spec.y_max);
  if (!finite || !(spec.x_max > spec.x_min) || !(spec.y_max > spec.y_min)) {
    throw Error(ErrorCode::kInvalidArgument, "top-view extent is empty");
  }
  if (!(spec.resolution > 0.0) || !std::isfinite(spec.resolution)) {
    throw Error(ErrorCode::kInvalidArgument, "top-view resolution must be > 0");
  }
  if (static_cast<double>(spec.cols()) * spec.rows() > 1e9) {
    throw Error(ErrorCode::kInvalidArgument, "top-view grid is too large");
  }
}

Json TopviewSpecToJson(const TopviewSpec& spec) {
  return {{"x_min", spec.x_min}, {"x_max", spec.x_max},     {"y_min", spec.y_min},
          {"y_max", spec.y_max}, {"resolution", spec.resolution}};
}

TopviewSpec TopviewSpecFromJson(const Json& document) {
  TopviewSpec spec;
  try {
    for (auto [key, field] : {std::pair{"x_min", &spec.x_min}, std::pair{"x_max", &spec.x_max},
                              std::pair{"y_min", &spec.y_min}, std::pair{"y_max", &spec.y_max},
                              std::pair{"resolution", &spec.resolution}}) {
      if (document.contains(key)) *field = document.at(key).get<double>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("top-view spec: ") + e.what());
  }
  ValidateTopviewSpec(spec);
  return spec;
}

double TopviewCamera::Height() const {
  return -(pose.R.transpose() * pose.t).z();
}

Eigen::Matrix3d TopviewCamera::Homography() const {
  const double h = Height();
  if (!(h > 0.0)) {
    throw Error(ErrorCode::kDegenerateHomography, "camera is not above the ground plane");
  }
  Eigen::Matrix3d H = GroundPlaneHomography(rectified, pose);
  H.col(0) *= h;
  H.col(1) *= h;
  return H;
}

std::size_t RemapGrid::ValidCount() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), 1));
}

RemapGrid TopviewGrid(const TopviewCamera& camera, const TopviewSpec& spec) {
  ValidateTopviewSpec(spec);
  const Eigen::Matrix3d H = camera.Homography();
  const Intrinsics& in = camera.distorted;
  const Eigen::Vector2d c_rect(camera.rectified.cx(), camera.rectified.cy());
  const Eigen::Vector2d c_src(in.cx(), in.cy());

  RemapGrid grid;
  grid.rows = spec.rows();
  grid.cols = spec.cols();
  const std::size_t n = static_cast<std::size_t>(grid.rows) * grid.cols;
  grid.src_u.assign(n, 0.0);
  grid.src_v.assign(n, 0.0);
  grid.valid.assign(n, 0);

  internal::ParallelFor(static_cast<std::size_t>(grid.rows), [&](std::size_t row) {
    for (int col = 0; col < grid.cols; ++col) {
      const GroundPoint g = spec.CellCenter(static_cast<int>(row), col);
      const Eigen::Vector3d p = H * Eigen::Vector3d(g.x, g.y, 1.0);
      // The third component is the depth of the ground point.
      if (!(p.z() > kHorizonTolerance * p.norm())) continue;
      const Eigen::Vector2d centered = p.head<2>() / p.z() - c_rect;

      Eigen::Vector2d source;
      if (camera.model == SourceModel::kEquidistant) {
        source = c_src + DistortEquidistant(centered, in.focal());
      } else {
        NormalizedPoint distorted;
        const NormalizedPoint undistorted{centered.x() / in.focal(), centered.y() / in.focal()};
        if (!InvertPolynomialUndistortion(undistorted, camera.coefficients, &distorted)) continue;
        source = c_src + in.focal() * Eigen::Vector2d(distorted.x, distorted.y);
      }
      if (!(source.x() >= 0.0 && source.x() < in.width() && source.y() >= 0.0 &&
            source.y() < in.height())) {
        continue;
      }
      const std::size_t i = grid.Index(static_cast<int>(row), col);
      grid.src_u[i] = source.x();
      grid.src_v[i] = source.y();
      grid.valid[i] = 1;
    }
  }, 1);
  return grid;
}

std::optional<Eigen::Vector2d> SourceToTopview(const TopviewCamera& camera,
                                               const TopviewSpec& spec,
                                               PixelPoint source) {
  const Intrinsics& in = camera.distorted;
  Eigen::Vector2d centered(source.u - in.cx(), source.v - in.cy());
  if (camera.model == SourceModel::kEquidistant) {
    if (centered.norm() / in.focal() >= MaxUndistortAngle()) return std::nullopt;
    centered = UndistortEquidistant(centered, in.focal());
  } else {
    centered *= camera.coefficients.Scale(centered.squaredNorm() / (in.focal() * in.focal()));
  }
  const Eigen::Vector3d pixel(camera.rectified.cx() + centered.x(),
                              camera.rectified.cy() + centered.y(), 1.0);
  const Eigen::Vector3d g = camera.Homography().inverse() * pixel;
  if (!(g.z() > kHorizonTolerance * g.norm())) return std::nullopt;
  return spec.CellOf({g.x() / g.z(), g.y() / g.z()});
}

Json RemapGridToJson(const RemapGrid& grid) {
  Json src_u = Json::array();
  Json src_v = Json::array();
  Json valid = Json::array();
  for (std::size_t i = 0; i < grid.valid.size(); ++i) {
    src_u.push_back(grid.valid[i] ? Json(grid.src_u[i]) : Json(nullptr));
    src_v.push_back(grid.valid[i] ? Json(grid.src_v[i]) : Json(nullptr));
    valid.push_back(static_cast<int>(grid.valid[i]));
  }
  return {{"rows", grid.rows}, {"cols", grid.cols}, {"src_u", src_u},
          {"src_v", src_v},    {"valid", valid}};
}

void WriteRemapGridBinary(const RemapGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(kGridMagic, sizeof(kGridMagic));
  Put<std::int32_t>(out, grid.rows);
  Put<std::int32_t>(out, grid.cols);
  for (std::size_t i = 0; i < grid.valid.size(); ++i) {
    Put<double>(out, grid.src_u[i]);
    Put<double>(out, grid.src_v[i]);
    Put<std::uint8_t>(out, grid.valid[i]);
  }
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

RemapGrid ReadRemapGridBinary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kGridMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::kParseError, path.string() + ": not a remap grid");
  }
  RemapGrid grid;
  grid.rows = Take<std::int32_t>(in);
  grid.cols = Take<std::int32_t>(in);
  if (!in || grid.rows < 0 || grid.cols < 0) {
    throw Error(ErrorCode::kParseError, path.string() + ": bad grid header");
  }
  const std::size_t n = static_cast<std::size_t>(grid.rows) * grid.cols;
  grid.src_u.resize(n);
  grid.src_v.resize(n);
  grid.valid.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.src_u[i] = Take<double>(in);
    grid.src_v[i] = Take<double>(in);
    grid.valid[i] = Take<std::uint8_t>(in);
  }
  if (!in) throw Error(ErrorCode::kParseError, path.string() + ": truncated grid");
  return grid;
}

Image ApplyRemap(const RemapGrid& grid, const Image& source, Interpolation interpolation) {
  Image out;
  out.width = grid.cols;
  out.height = grid.rows;
  out.channels = source.channels;
  out.pixels.assign(static_cast<std::size_t>(out.width) * out.height * out.channels, 0);
  if (source.width <= 0 || source.height <= 0) return out;

  internal::ParallelFor(static_cast<std::size_t>(grid.rows), [&](std::size_t row) {
    for (int col = 0; col < grid.cols; ++col) {
      const std::size_t i = grid.Index(static_cast<int>(row), col);
      if (!grid.valid[i]) continue;
      std::uint8_t* dst = &out.pixels[i * out.channels];
      // Pixel x covers [x, x + 1); its center is at x + 0.5.
      const double u = grid.src_u[i];
      const double v = grid.src_v[i];
      if (interpolation == Interpolation::kNearest) {
        const int x = static_cast<int>(std::floor(u));
        const int y = static_cast<int>(std::floor(v));
        if (x < 0 || y < 0 || x >= source.width || y >= source.height) continue;
        for (int c = 0; c < source.channels; ++c) dst[c] = source.at(x, y, c);
        continue;
      }
      const double fx = std::clamp(u - 0.5, 0.0, source.width - 1.0);
      const double fy = std::clamp(v - 0.5, 0.0, source.height - 1.0);
      const int x0 = static_cast<int>(fx);
      const int y0 = static_cast<int>(fy);
      const int x1 = std::min(x0 + 1, source.width - 1);
      const int y1 = std::min(y0 + 1, source.height - 1);
      const double ax = fx - x0;
      const double ay = fy - y0;
      for (int c = 0; c < source.channels; ++c) {
        const double top = (1 - ax) * source.at(x0, y0, c) + ax * source.at(x1, y0, c);
        const double bottom = (1 - ax) * source.at(x0, y1, c) + ax * source.at(x1, y1, c);
        dst[c] = static_cast<std::uint8_t>(std::lround((1 - ay) * top + ay * bottom));
      }
    }
  }, 1);
  return out;
}

}  // namespace autocalib
