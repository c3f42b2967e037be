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

#include <vector>

#include "geospline/geometry.hpp"
#include "geospline/potentials.hpp"
#include "geospline/types.hpp"

namespace geospline {

/// Integration state of the fourth-order extremal equations, reduced to a
/// first-order system: pose x plus the body-velocity chain (v, v', v'') and,
/// for constrained problems, the multiplier values.
struct ExtremalState {
  GroupElement x;
  Vec v, v1, v2;
  Vec lambda;  // empty when unconstrained

  static ExtremalState zero(Group g);
};

/// Linear-in-velocity constraint data: the algebra coordinates forced to
/// zero and, per constraint, the map S with d omega(z, w) = I(S z, w).
struct ConstraintSpec {
  std::vector<int> zero_indices;
  std::vector<Mat> s_maps;

  /// The knife-edge / unicycle constraint on SE(2): no lateral slip
  /// (third algebra coordinate zero), S(u) = -(1/J) u_2 e_1 + (1/m) u_1 e_2.
  static ConstraintSpec unicycle_knife_edge(double J, double m);

  int count() const { return static_cast<int>(zero_indices.size()); }
  /// Checks index ranges and that I*S is antisymmetric (S skew w.r.t. the
  /// metric), which the multiplier elimination relies on.
  void validate(const MetricTensor& metric) const;
};

/// Time derivatives produced by a right-hand side: v''' and (when the
/// problem is constrained) the multiplier rates.
struct StateDerivs {
  Vec v3;
  Vec lambda_dot;  // empty when unconstrained
};

/// Fully general right-hand side: solves the fourth-order extremal equation
/// for v''' given the connection, obstacle set, and tension sigma. Works for
/// every group/metric this library ships.
Vec rhs_general(const ExtremalState& s, const Connection& conn,
                const std::vector<Obstacle>& obstacles, double sigma);

/// Compact group (bi-invariant metric) specialization with one point
/// obstacle: v''' = sigma v' - [v, v''] - tau/(2 d^4) log(x^-1 h).
Vec rhs_compact(const ExtremalState& s, const Obstacle& point, double sigma);

/// SO(3) form of the same equation written with cross products.
Vec rhs_so3(const ExtremalState& s, const GroupElement& Q, double tau, double sigma);

/// se(3) body equations for the identity metric and sphere obstacles,
/// written out in cross products (independent of rhs_general).
Vec rhs_se3_body(const ExtremalState& s, const std::vector<Obstacle>& spheres,
                 double sigma);

/// Unicycle (knife-edge) equations on SE(2) with metric diag(J, m, m) and
/// disc obstacles. Consumes the multiplier lambda from the state, returns
/// v''' (third component identically zero) and lambda'.
StateDerivs rhs_se2_unicycle(const ExtremalState& s,
                             const std::vector<Obstacle>& discs, double sigma,
                             double m, double J);

/// Norm of sum_j lambda'_j Y_j + lambda_j S_j(v) in the body frame, the
/// quantity that vanishes identically on abnormal extremals. Diagnostic.
double abnormal_residual(const ExtremalState& s, const ConstraintSpec& constraints,
                         const Vec& lambda_dot, const MetricTensor& metric);

}  // namespace geospline
