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

#include "geospline/dynamics.hpp"

#include <cassert>
#include <cmath>

#include "geospline/lie_groups.hpp"

namespace geospline {

namespace {

Eigen::Vector2d jmul(const Eigen::Vector2d& x) { return {x.y(), -x.x()}; }

Vec summed_grad_body(const std::vector<Obstacle>& obstacles, const GroupElement& x,
                     int n) {
  Vec g = Vec::Zero(n);
  for (size_t i = 0; i < obstacles.size(); ++i) {
    if (obstacles[i].tau == 0.0) continue;
    g += potential_grad_body(obstacles[i], x, static_cast<int>(i));
  }
  return g;
}

}  // namespace

ExtremalState ExtremalState::zero(Group g) {
  ExtremalState s;
  s.x = GroupElement::identity(g);
  s.v = Vec::Zero(algebra_dim(g));
  s.v1 = Vec::Zero(algebra_dim(g));
  s.v2 = Vec::Zero(algebra_dim(g));
  return s;
}

ConstraintSpec ConstraintSpec::unicycle_knife_edge(double J, double m) {
  if (J <= 0.0 || m <= 0.0) {
    throw ValidationError("unicycle constraint needs positive J and m");
  }
  ConstraintSpec cs;
  cs.zero_indices = {2};
  // S represents d(omega) through the metric, I(S z, w) = -omega([z, w]),
  // for the constraint one-form omega = e^3 that pairs +1 with b2.
  Mat S = Mat::Zero(3, 3);
  S(0, 1) = 1.0 / J;
  S(1, 0) = -1.0 / m;
  cs.s_maps = {S};
  return cs;
}

void ConstraintSpec::validate(const MetricTensor& metric) const {
  const int n = static_cast<int>(metric.diag.size());
  if (s_maps.size() != zero_indices.size()) {
    throw ValidationError("constraint spec: one S map per constrained coordinate");
  }
  for (int idx : zero_indices) {
    if (idx < 0 || idx >= n) {
      throw ValidationError("constraint index out of algebra range");
    }
  }
  for (const Mat& S : s_maps) {
    if (S.rows() != n || S.cols() != n) {
      throw ValidationError("constraint S map has wrong dimensions");
    }
    const Mat IS = metric.diag.asDiagonal() * S;
    if ((IS + IS.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw ValidationError("constraint S map is not skew with respect to the metric");
    }
  }
}

Vec rhs_general(const ExtremalState& s, const Connection& conn,
                const std::vector<Obstacle>& obstacles, double sigma) {
  const int n = algebra_dim(conn.group);
  const Vec& v = s.v;
  const Vec& v1 = s.v1;
  const Vec& v2 = s.v2;

  const Vec nvv = nabla(conn, v, v);
  const Vec nv1v = nabla(conn, v1, v);

  Vec terms = nabla(conn, v2, v) + 3.0 * nabla(conn, v1, v1) + 3.0 * nabla(conn, v, v2) +
              nabla(conn, v1, nvv) + 2.0 * nabla(conn, v, nv1v) +
              3.0 * nabla(conn, v, nabla(conn, v, v1)) +
              nabla(conn, v, nabla(conn, v, nvv)) + curvature(conn, v1, v, v) +
              curvature(conn, nvv, v, v) - sigma * nvv - sigma * v1;
  if (!obstacles.empty()) {
    terms += 0.5 * conn.metric.raise(summed_grad_body(obstacles, s.x, n));
  }
  return -terms;
}

Vec rhs_compact(const ExtremalState& s, const Obstacle& point, double sigma) {
  const Group g = s.x.group;
  Vec v3 = sigma * s.v1 - bracket(g, s.v, s.v2);
  if (point.tau != 0.0) {
    const Vec rel = log(compose(inverse(s.x), point.pose));
    const double d2 = rel.squaredNorm();
    if (d2 <= kInsideMargin) {
      throw InsideObstacleError("configuration coincides with a point obstacle", -1, d2);
    }
    v3 -= (point.tau / (2.0 * d2 * d2)) * rel;
  }
  return v3;
}

Vec rhs_so3(const ExtremalState& s, const GroupElement& Q, double tau, double sigma) {
  Eigen::Vector3d v3 =
      Eigen::Vector3d(s.v2.head<3>()).cross(Eigen::Vector3d(s.v.head<3>())) +
      sigma * Eigen::Vector3d(s.v1.head<3>());
  if (tau != 0.0) {
    const Vec rel = log(compose(inverse(s.x), Q));
    const double d2 = rel.squaredNorm();
    if (d2 <= kInsideMargin) {
      throw InsideObstacleError("orientation coincides with a point obstacle", -1, d2);
    }
    v3 -= (tau / (2.0 * d2 * d2)) * Eigen::Vector3d(rel.head<3>());
  }
  return v3;
}

Vec rhs_se3_body(const ExtremalState& s, const std::vector<Obstacle>& spheres,
                 double sigma) {
  const Eigen::Vector3d a = s.v.head<3>(), b = s.v.tail<3>();
  const Eigen::Vector3d a1 = s.v1.head<3>(), b1 = s.v1.tail<3>();
  const Eigen::Vector3d a2 = s.v2.head<3>(), b2 = s.v2.tail<3>();

  const Eigen::Vector3d axb = a.cross(b);
  Eigen::Vector3d rot = a2.cross(a) + sigma * a1;
  Eigen::Vector3d trans = 3.0 * b2.cross(a) + 3.0 * b1.cross(a1) + b.cross(a2) +
                          sigma * (b1 + axb) - a1.cross(axb) - 2.0 * a.cross(a1.cross(b)) -
                          3.0 * a.cross(a.cross(b1)) - a.cross(a.cross(axb));
  for (size_t i = 0; i < spheres.size(); ++i) {
    const Obstacle& o = spheres[i];
    if (o.kind != Obstacle::Kind::EuclideanSphere) {
      throw std::invalid_argument("rhs_se3_body handles sphere obstacles only");
    }
    if (o.tau == 0.0) continue;
    const double f = obstacle_clearance(o, s.x);
    if (f <= kInsideMargin) {
      throw InsideObstacleError("position is inside a sphere obstacle",
                                static_cast<int>(i), f);
    }
    trans += (o.tau / (f * f)) * Eigen::Vector3d(s.x.R.transpose() * (s.x.r - o.center));
  }
  Vec v3(6);
  v3 << rot, trans;
  return v3;
}

StateDerivs rhs_se2_unicycle(const ExtremalState& s, const std::vector<Obstacle>& discs,
                             double sigma, double m, double J) {
  if (s.lambda.size() != 1) {
    throw std::invalid_argument("unicycle right-hand side needs one multiplier in the state");
  }
  const double a = s.v[0], a1 = s.v1[0], a2 = s.v2[0];
  const Eigen::Vector2d b = s.v.tail<2>(), b1 = s.v1.tail<2>(), b2 = s.v2.tail<2>();
  const double lambda = s.lambda[0];

  // Multiplier-free part of the translational equation.
  Eigen::Vector2d Nb = a2 * jmul(b) + 3.0 * a1 * jmul(b1) + 3.0 * a * jmul(b2) +
                       3.0 * a * a1 * b + 3.0 * a * a * b1 - a * a * a * jmul(b) -
                       sigma * a * jmul(b) + sigma * b1;
  for (size_t i = 0; i < discs.size(); ++i) {
    const Obstacle& o = discs[i];
    if (o.kind != Obstacle::Kind::EuclideanSphere) {
      throw std::invalid_argument("rhs_se2_unicycle handles disc obstacles only");
    }
    if (o.tau == 0.0) continue;
    const double f = obstacle_clearance(o, s.x);
    if (f <= kInsideMargin) {
      throw InsideObstacleError("position is inside a disc obstacle",
                                static_cast<int>(i), f);
    }
    Nb += (o.tau / (m * f * f)) *
          Eigen::Vector2d(s.x.R.transpose() * (s.x.r - o.center));
  }

  // The third-row solvability condition b2''' = 0 fixes lambda'; the
  // lambda coupling S(v) = (b1/J, -a/m, 0) never touches that row.  Sign
  // convention: lambda multiplies +b2 in the extended action, so the
  // couplings here are the stationarity conditions of J + int(lambda b2).
  const double lambda_dot = -m * Nb[1];
  assert(std::abs(Nb[1] + lambda_dot / m) <= 1e-12 * std::max(1.0, std::abs(Nb[1])));

  StateDerivs out;
  out.v3 = Vec::Zero(3);
  out.v3[0] = sigma * a1 + (lambda / J) * b[0];
  out.v3[1] = Nb[0] - (lambda / m) * a;
  out.v3[2] = 0.0;
  out.lambda_dot = Vec::Constant(1, lambda_dot);
  return out;
}

double abnormal_residual(const ExtremalState& s, const ConstraintSpec& constraints,
                         const Vec& lambda_dot, const MetricTensor& metric) {
  const int n = static_cast<int>(metric.diag.size());
  Vec acc = Vec::Zero(n);
  for (int j = 0; j < constraints.count(); ++j) {
    Vec e = Vec::Zero(n);
    e[constraints.zero_indices[j]] = 1.0;
    acc += lambda_dot[j] * metric.raise(e);
    acc += s.lambda[j] * (constraints.s_maps[j] * s.v);
  }
  return acc.norm();
}

}  // namespace geospline
