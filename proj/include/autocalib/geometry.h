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

// Camera geometry: pinhole projection, the equidistant fisheye mapping,
// polynomial radial undistortion and the ground-plane homography.
//
// Conventions: pixels have their origin at the top-left corner, the
// principal point sits at the image center and the world ground plane is
// Z = 0. All angles are radians.

#ifndef AUTOCALIB_GEOMETRY_H_
#define AUTOCALIB_GEOMETRY_H_

#include <Eigen/Core>

namespace autocalib {

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;

  Eigen::Vector2d vec() const { return {u, v}; }
  static PixelPoint From(const Eigen::Vector2d& p) { return {p.x(), p.y()}; }
};

// Intrinsics-free image coordinates.
struct NormalizedPoint {
  double x = 0.0;
  double y = 0.0;

  double SquaredRadius() const { return x * x + y * y; }
};

// A point on the Z = 0 world plane, in units of the camera height.
struct GroundPoint {
  double x = 0.0;
  double y = 0.0;
};

// Square pixels, zero skew, principal point at the image center.
class Intrinsics {
 public:
  // Throws kInvalidArgument unless focal > 0 and both dimensions are > 0.
  Intrinsics(double focal, int width, int height);

  double focal() const { return focal_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double cx() const { return 0.5 * width_; }
  double cy() const { return 0.5 * height_; }
  PixelPoint principal_point() const { return {cx(), cy()}; }
  double diagonal() const;

  Eigen::Matrix3d K() const;

 private:
  double focal_;
  int width_;
  int height_;
};

// x_u = x_d * (1 + k1 r^2 + k2 r^4 + k3 r^6) over distorted normalized
// coordinates.
struct DistortionCoefficients {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;

  double Scale(double squared_radius) const {
    const double r2 = squared_radius;
    return 1.0 + r2 * (k1 + r2 * (k2 + r2 * k3));
  }
};

// World-to-camera transform: x_cam = R * X + t.
struct Pose {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
};

// True when max|R R^T - I| <= tolerance and |det(R) - 1| <= tolerance.
bool IsRotation(const Eigen::Matrix3d& R, double tolerance = 1e-9);

// Angle of the relative rotation a^T b, in radians.
double RotationGeodesicAngle(const Eigen::Matrix3d& a,
                             const Eigen::Matrix3d& b);

struct Projection {
  PixelPoint pixel;
  double depth = 0.0;  // lambda; positive in front of the camera
};

// Throws kNonPositiveDepth when the point is not in front of the camera.
Projection ProjectWorldToPixel(const Intrinsics& intrinsics, const Pose& pose,
                               const Eigen::Vector3d& world_point);

NormalizedPoint NormalizePixel(const Intrinsics& intrinsics, PixelPoint p);
PixelPoint DenormalizePoint(const Intrinsics& intrinsics, NormalizedPoint n);

// Largest incidence angle the undistortion accepts: (pi/2)(1 - 1e-3).
double MaxUndistortAngle();

// Equidistant (r_d = f theta) to rectilinear (r_u = f tan theta). Input and
// output are pixel offsets from the principal point. Throws
// kBeyondHemisphere when r_d / f >= MaxUndistortAngle().
Eigen::Vector2d UndistortEquidistant(const Eigen::Vector2d& centered,
                                     double focal);

// Rectilinear to equidistant; total for every finite input.
Eigen::Vector2d DistortEquidistant(const Eigen::Vector2d& centered,
                                   double focal);

NormalizedPoint ApplyPolynomialUndistortion(NormalizedPoint distorted,
                                            const DistortionCoefficients& k);

// Inverse of ApplyPolynomialUndistortion by Newton iteration on the radius,
// seeded with the equidistant inverse. Returns false if the polynomial is not
// invertible along the ray (non-monotone or no convergence).
bool InvertPolynomialUndistortion(NormalizedPoint undistorted,
                                  const DistortionCoefficients& k,
                                  NormalizedPoint* distorted);

// Normalize, apply the polynomial, denormalize with the same intrinsics.
PixelPoint UndistortPixel(const Intrinsics& intrinsics,
                          const DistortionCoefficients& k, PixelPoint p);

// H = K [r1 | r2 | t]; maps homogeneous (X, Y, 1) on the ground plane to
// homogeneous pixels. Throws kDegenerateHomography when H is singular.
Eigen::Matrix3d GroundPlaneHomography(const Intrinsics& intrinsics,
                                      const Pose& pose);

// Dehomogenizes H (X, Y, 1); negative scales are allowed. Throws
// kPointAtHorizon when the homogeneous scale vanishes.
PixelPoint GroundToPixel(const Eigen::Matrix3d& H, GroundPoint g);

// Dehomogenized H^-1 (u, v, 1). Throws kPointAtHorizon for pixels on the
// image of the line at infinity.
GroundPoint PixelToGround(const Eigen::Matrix3d& H, PixelPoint p);

}  // namespace autocalib

#endif  // AUTOCALIB_GEOMETRY_H_
