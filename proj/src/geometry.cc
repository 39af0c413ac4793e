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

#include "autocalib/geometry.h"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "autocalib/error.h"

namespace autocalib {
namespace {

constexpr double kHemisphereMargin = 1e-3;
constexpr double kHorizonTolerance = 1e-9;
constexpr double kSingularHomography = 1e-12;

Eigen::Vector3d Homogeneous(double a, double b) { return {a, b, 1.0}; }

}  // namespace

Intrinsics::Intrinsics(double focal, int width, int height)
    : focal_(focal), width_(width), height_(height) {
  if (!(focal > 0.0) || !std::isfinite(focal) || width <= 0 || height <= 0) {
    std::ostringstream msg;
    msg << "intrinsics need f > 0 and a positive image size, got f=" << focal
        << " size=" << width << "x" << height;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

double Intrinsics::diagonal() const {
  return std::hypot(static_cast<double>(width_), static_cast<double>(height_));
}

Eigen::Matrix3d Intrinsics::K() const {
  Eigen::Matrix3d K;
  K << focal_, 0.0, cx(),
       0.0, focal_, cy(),
       0.0, 0.0, 1.0;
  return K;
}

bool IsRotation(const Eigen::Matrix3d& R, double tolerance) {
  const double orthogonality =
      (R * R.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return orthogonality <= tolerance && std::abs(R.determinant() - 1.0) <= tolerance;
}

double RotationGeodesicAngle(const Eigen::Matrix3d& a,
                             const Eigen::Matrix3d& b) {
  const Eigen::Matrix3d relative = a.transpose() * b;
  // atan2 form stays accurate for both tiny and near-pi angles.
  const Eigen::Vector3d axis(relative(2, 1) - relative(1, 2),
                             relative(0, 2) - relative(2, 0),
                             relative(1, 0) - relative(0, 1));
  return std::atan2(0.5 * axis.norm(), 0.5 * (relative.trace() - 1.0));
}

Projection ProjectWorldToPixel(const Intrinsics& intrinsics, const Pose& pose,
                               const Eigen::Vector3d& world_point) {
  const Eigen::Vector3d camera = pose.R * world_point + pose.t;
  if (!(camera.z() > 0.0)) {
    std::ostringstream msg;
    msg << "point (" << world_point.transpose() << ") has depth " << camera.z();
    throw Error(ErrorCode::kNonPositiveDepth, msg.str());
  }
  const Eigen::Vector3d image = intrinsics.K() * camera;
  return {{image.x() / image.z(), image.y() / image.z()}, image.z()};
}

NormalizedPoint NormalizePixel(const Intrinsics& intrinsics, PixelPoint p) {
  return {(p.u - intrinsics.cx()) / intrinsics.focal(),
          (p.v - intrinsics.cy()) / intrinsics.focal()};
}

PixelPoint DenormalizePoint(const Intrinsics& intrinsics, NormalizedPoint n) {
  return {intrinsics.focal() * n.x + intrinsics.cx(),
          intrinsics.focal() * n.y + intrinsics.cy()};
}

double MaxUndistortAngle() {
  return 0.5 * std::numbers::pi * (1.0 - kHemisphereMargin);
}

Eigen::Vector2d UndistortEquidistant(const Eigen::Vector2d& centered,
                                     double focal) {
  const double theta = centered.norm() / focal;
  if (theta >= MaxUndistortAngle()) {
    std::ostringstream msg;
    msg << "incidence angle " << theta << " rad at f=" << focal
        << " is beyond the rectilinear limit";
    throw Error(ErrorCode::kBeyondHemisphere, msg.str());
  }
  if (theta == 0.0) return centered;
  return centered * (std::tan(theta) / theta);
}

Eigen::Vector2d DistortEquidistant(const Eigen::Vector2d& centered,
                                   double focal) {
  const double r_u = centered.norm();
  if (r_u == 0.0) return centered;
  return centered * (focal * std::atan(r_u / focal) / r_u);
}

NormalizedPoint ApplyPolynomialUndistortion(NormalizedPoint distorted,
                                            const DistortionCoefficients& k) {
  const double scale = k.Scale(distorted.SquaredRadius());
  return {distorted.x * scale, distorted.y * scale};
}

bool InvertPolynomialUndistortion(NormalizedPoint undistorted,
                                  const DistortionCoefficients& k,
                                  NormalizedPoint* distorted) {
  const double r_u = std::sqrt(undistorted.SquaredRadius());
  if (r_u == 0.0) {
    *distorted = undistorted;
    return true;
  }
  double r = std::atan(r_u);
  for (int iter = 0; iter < 50; ++iter) {
    const double r2 = r * r;
    const double residual = r * k.Scale(r2) - r_u;
    const double slope =
        1.0 + r2 * (3.0 * k.k1 + r2 * (5.0 * k.k2 + r2 * 7.0 * k.k3));
    if (!(slope > 0.0)) return false;
    const double step = residual / slope;
    r = std::max(r - step, 0.5 * r);
    if (std::abs(step) <= 1e-15 * std::max(1.0, r)) {
      const double ratio = r / r_u;
      *distorted = {undistorted.x * ratio, undistorted.y * ratio};
      return std::abs(r * k.Scale(r * r) - r_u) <= 1e-12 * std::max(1.0, r_u);
    }
  }
  return false;
}

PixelPoint UndistortPixel(const Intrinsics& intrinsics,
                          const DistortionCoefficients& k, PixelPoint p) {
  return DenormalizePoint(
      intrinsics, ApplyPolynomialUndistortion(NormalizePixel(intrinsics, p), k));
}

Eigen::Matrix3d GroundPlaneHomography(const Intrinsics& intrinsics,
                                      const Pose& pose) {
  Eigen::Matrix3d plane;
  plane.col(0) = pose.R.col(0);
  plane.col(1) = pose.R.col(1);
  plane.col(2) = pose.t;
  const Eigen::Matrix3d H = intrinsics.K() * plane;
  const double scale = H.norm();
  if (!(std::abs(H.determinant()) >= kSingularHomography * scale * scale * scale)) {
    throw Error(ErrorCode::kDegenerateHomography,
                "ground-plane homography is singular");
  }
  return H;
}

PixelPoint GroundToPixel(const Eigen::Matrix3d& H, GroundPoint g) {
  const Eigen::Vector3d p = H * Homogeneous(g.x, g.y);
  if (std::abs(p.z()) < kHorizonTolerance * p.norm()) {
    throw Error(ErrorCode::kPointAtHorizon, "ground point maps to infinity");
  }
  return {p.x() / p.z(), p.y() / p.z()};
}

GroundPoint PixelToGround(const Eigen::Matrix3d& H, PixelPoint p) {
  const Eigen::Vector3d g = H.inverse() * Homogeneous(p.u, p.v);
  if (std::abs(g.z()) < kHorizonTolerance * g.norm()) {
    std::ostringstream msg;
    msg << "pixel (" << p.u << ", " << p.v << ") lies on the horizon";
    throw Error(ErrorCode::kPointAtHorizon, msg.str());
  }
  return {g.x() / g.z(), g.y() / g.z()};
}

}  // namespace autocalib
