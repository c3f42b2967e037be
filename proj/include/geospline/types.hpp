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

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace geospline {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// The matrix groups this library works on.
enum class Group { SO3, SE2, SE3 };

/// Dimension of the Lie algebra (degrees of freedom).
int algebra_dim(Group g);

/// Number of rotational algebra coordinates (they come first in an
/// algebra vector: SO(3)/SE(3) use 3, SE(2) uses the single angle rate).
int rot_dim(Group g);

/// Number of translational algebra coordinates (0 for SO(3)).
int trans_dim(Group g);

/// Side length of the homogeneous matrix representation.
int matrix_dim(Group g);

const char* group_name(Group g);

/// A group element stored as a rotation block and a translation part.
/// R is 3x3 for SO(3)/SE(3) and 2x2 for SE(2); r is empty for SO(3).
struct GroupElement {
  Group group = Group::SO3;
  Mat R;
  Vec r;

  static GroupElement identity(Group g);
  static GroupElement from_parts(Group g, const Mat& R, const Vec& r);

  /// Frobenius deviation of R from orthonormality, ||R^T R - I||_F.
  double orthogonality_drift() const;
};

/// Diagonal left-invariant metric on the algebra. `diag` holds the full
/// diagonal in algebra coordinate order (rotational entries first), e.g.
/// SE(3): (J1, J2, J3, m1, m2, m3); SE(2): (J, m, m).
struct MetricTensor {
  Group group = Group::SO3;
  Vec diag;

  static MetricTensor identity(Group g);
  static MetricTensor so3(const Eigen::Vector3d& J);
  static MetricTensor se2(double J, double m);
  static MetricTensor se3(const Eigen::Vector3d& J, const Eigen::Vector3d& m);

  /// Flat map (lower an index): algebra vector -> covector coordinates.
  Vec lower(const Vec& u) const;
  /// Sharp map (raise an index): covector coordinates -> algebra vector.
  Vec raise(const Vec& mu) const;

  bool is_identity(double tol = 0.0) const;
  void validate() const;
};

/// Problem data fails a structural precondition (dimensions, feasibility,
/// ordering). The CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A trajectory sample (or an explicit query) reached the singular set of a
/// barrier potential. Carries which obstacle and, when known, the time.
struct InsideObstacleError : std::runtime_error {
  InsideObstacleError(const std::string& what, int obstacle_index, double f_value,
                      double time = -1.0)
      : std::runtime_error(what), obstacle_index(obstacle_index), f_value(f_value), time(time) {}
  int obstacle_index;
  double f_value;
  double time;
};

/// Logarithm requested outside the principal branch (rotation angle within
/// 1e-6 of pi).
struct SingularLogError : std::runtime_error {
  explicit SingularLogError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geospline
