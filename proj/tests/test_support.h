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
// Independent reference computations shared by the tests. Nothing here calls
// into the library code it is used to check.

#ifndef AUTOCALIB_TESTS_TEST_SUPPORT_H_
#define AUTOCALIB_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace autocalib::testing {

// Uniformly distributed rotation from a normalized Gaussian quaternion.
inline Eigen::Matrix3d RandomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline Eigen::Matrix3d RotZ(double radians) {
  return Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

// Sum of squared perpendicular distances to the best line, by scanning the
// line angle and taking the optimal offset (the mean projection) for each,
// then polishing with a ternary search around the best sample.
inline double BruteForceLineSse(const std::vector<Eigen::Vector2d>& points) {
  const auto sse_at = [&](double angle) {
    const Eigen::Vector2d normal(std::cos(angle), std::sin(angle));
    double mean = 0.0;
    for (const auto& p : points) mean += normal.dot(p);
    mean /= points.size();
    double sse = 0.0;
    for (const auto& p : points) sse += std::pow(normal.dot(p) - mean, 2);
    return sse;
  };
  const int samples = 3600;
  double best_angle = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double angle = std::numbers::pi * i / samples;
    if (const double s = sse_at(angle); s < best) {
      best = s;
      best_angle = angle;
    }
  }
  double lo = best_angle - std::numbers::pi / samples;
  double hi = best_angle + std::numbers::pi / samples;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (sse_at(m1) < sse_at(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::min(best, sse_at(0.5 * (lo + hi)));
}

// Equidistant fisheye projection of a camera-frame point written out from
// the model definition: r_d = f * theta with theta the angle off the axis.
inline Eigen::Vector2d EquidistantProject(const Eigen::Vector3d& camera, double focal,
                                          const Eigen::Vector2d& center) {
  const double rho = camera.head<2>().norm();
  if (rho == 0.0) return center;
  const double theta = std::atan2(rho, camera.z());
  return center + focal * theta * camera.head<2>() / rho;
}

}  // namespace autocalib::testing

#endif  // AUTOCALIB_TESTS_TEST_SUPPORT_H_
