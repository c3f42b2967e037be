// Copyright 2026 The Geospline Authors
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

#pragma once

#include "geospline/types.hpp"

namespace geospline {

/// Samples whose barrier margin f drops to this value or below count as
/// inside the obstacle.
inline constexpr double kInsideMargin = 1e-9;

/// A repulsive barrier. Three kinds:
///  - EuclideanSphere: V = tau / (||r - p||^2 - c), a sphere (or disc) of
///    radius sqrt(c) centered at p. SE(2)/SE(3) only.
///  - OrientationPoint: V = tau / d(g, Q)^2 with d the rotation-angle
///    distance ||log(R^T Q)||. SO(3) only.
///  - CompactGroupPoint: same barrier written for a compact group element;
///    SO(3) is the compact group this library ships.
struct Obstacle {
  enum class Kind { EuclideanSphere, OrientationPoint, CompactGroupPoint };

  Kind kind = Kind::EuclideanSphere;
  double tau = 0.0;
  Vec center;          // EuclideanSphere: p (dim 2 or 3)
  double offset = 0.0; // EuclideanSphere: c > 0
  GroupElement pose;   // OrientationPoint / CompactGroupPoint: the point h

  static Obstacle sphere(const Vec& center, double offset, double tau);
  static Obstacle orientation(const GroupElement& Q, double tau);
  static Obstacle compact_point(const GroupElement& h, double tau);

  void validate(Group g) const;
  const char* kind_name() const;
};

/// Barrier margin f(g): distance-squared surplus for spheres
/// (||r - p||^2 - c), squared group distance d^2 for point obstacles.
/// Positive outside the obstacle; the potential diverges as f -> 0+.
double obstacle_clearance(const Obstacle& obs, const GroupElement& g);

/// Potential value tau / f(g). Throws InsideObstacleError when
/// f(g) <= kInsideMargin.
double potential_value(const Obstacle& obs, const GroupElement& g,
                       int obstacle_index = -1);

/// Body-frame differential of the potential: the covector dV in algebra
/// coordinates (apply the inverse metric to get the gradient vector).
///   sphere:       (0, -2 tau / f^2 * R^T (r - p))
///   group point:  2 tau / d^4 * log(g^-1 h)
/// Throws InsideObstacleError when f(g) <= kInsideMargin.
Vec potential_grad_body(const Obstacle& obs, const GroupElement& g,
                        int obstacle_index = -1);

}  // namespace geospline
