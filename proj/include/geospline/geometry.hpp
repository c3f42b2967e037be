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

/// Which formula evaluates the (restricted) Levi-Civita connection of the
/// left-invariant metric on the algebra.
enum class ConnectionKind {
  /// Generic diagonal metric, evaluated through the coadjoint formula
  ///   nabla_w u = 1/2 [w,u] - 1/2 I#(ad*_w Ib(u) + ad*_u Ib(w)).
  GeneralLeftInvariant,
  /// se(3) with inertia/mass blocks (J, M), closed form.
  SE3Closed,
  /// se(3) with J = M = I: nabla_{(a,b)}(c,d) = (1/2 a x c, a x d).
  SE3Unit,
  /// se(2) with metric diag(J, m, m): nabla_{(a,b)}(c,d) = (0, -a J d);
  /// the same for every such metric.
  SE2Closed,
  /// Compact group with bi-invariant metric: nabla_w u = 1/2 [w,u].
  BiInvariant,
};

/// A connection bundles the evaluation rule with the group and the metric it
/// belongs to (the metric also serves inner products downstream).
struct Connection {
  ConnectionKind kind = ConnectionKind::GeneralLeftInvariant;
  Group group = Group::SO3;
  MetricTensor metric;

  static Connection general(const MetricTensor& metric);
  static Connection se3_closed(const Eigen::Vector3d& J, const Eigen::Vector3d& m);
  static Connection se3_unit();
  static Connection se2_closed(double J, double m);
  /// SO(3) only; the bi-invariant closed forms need an isotropic metric.
  static Connection bi_invariant(double scale = 1.0);
};

/// Coadjoint action in coordinates: (ad*_w mu)_i = <mu, [w, e_i]>.
Vec ad_star(Group g, const Vec& w, const Vec& mu);

/// Covariant derivative nabla_w u at the algebra level. The first argument
/// is the direction of differentiation (leading term 1/2 [w,u]).
Vec nabla(const Connection& conn, const Vec& w, const Vec& u);

/// Curvature tensor R(u,w)z. Closed forms where they exist (SE3Unit,
/// SE2Closed is flat, BiInvariant is -1/4 [[u,w],z]); the general kinds
/// evaluate through curvature_oracle.
Vec curvature(const Connection& conn, const Vec& u, const Vec& w, const Vec& z);

/// First-principles curvature on left-invariant fields:
///   nabla_u nabla_w z - nabla_w nabla_u z - nabla_[u,w] z.
/// Exact for left-invariant arguments, so it doubles as the test oracle for
/// every closed form.
Vec curvature_oracle(const Connection& conn, const Vec& u, const Vec& w, const Vec& z);

/// Body-frame representations of the covariant derivatives of a curve whose
/// body velocity chain is (v, v' = v1, v'' = v2, v''' = v3):
///   d2 = D^2x/dt^2, d3 = D^3x/dt^3, d4 = D^4x/dt^4.
struct CovariantDerivs {
  Vec d2, d3, d4;
};

CovariantDerivs covariant_chain(const Connection& conn, const Vec& v, const Vec& v1,
                                const Vec& v2, const Vec& v3);

}  // namespace geospline
