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

#include "geospline/geometry.hpp"

#include "geospline/lie_groups.hpp"

namespace geospline {

namespace {

void check_group(const Connection& conn, const Vec& v, const char* op) {
  if (v.size() != algebra_dim(conn.group)) {
    throw std::invalid_argument(std::string(op) + ": algebra vector dimension " +
                                std::to_string(v.size()) + " does not match " +
                                group_name(conn.group));
  }
}

Eigen::Vector2d jmul(const Eigen::Vector2d& x) { return {x.y(), -x.x()}; }

}  // namespace

Connection Connection::general(const MetricTensor& metric) {
  metric.validate();
  Connection c;
  c.kind = ConnectionKind::GeneralLeftInvariant;
  c.group = metric.group;
  c.metric = metric;
  return c;
}

Connection Connection::se3_closed(const Eigen::Vector3d& J, const Eigen::Vector3d& m) {
  Connection c;
  c.kind = ConnectionKind::SE3Closed;
  c.group = Group::SE3;
  c.metric = MetricTensor::se3(J, m);
  return c;
}

Connection Connection::se3_unit() {
  Connection c;
  c.kind = ConnectionKind::SE3Unit;
  c.group = Group::SE3;
  c.metric = MetricTensor::identity(Group::SE3);
  return c;
}

Connection Connection::se2_closed(double J, double m) {
  Connection c;
  c.kind = ConnectionKind::SE2Closed;
  c.group = Group::SE2;
  c.metric = MetricTensor::se2(J, m);
  return c;
}

Connection Connection::bi_invariant(double scale) {
  if (scale <= 0.0) {
    throw ValidationError("bi-invariant metric scale must be positive");
  }
  Connection c;
  c.kind = ConnectionKind::BiInvariant;
  c.group = Group::SO3;
  c.metric = MetricTensor::so3(Eigen::Vector3d::Constant(scale));
  return c;
}

Vec ad_star(Group g, const Vec& w, const Vec& mu) {
  const int n = algebra_dim(g);
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = mu.dot(bracket(g, w, basis_vector(g, i)));
  }
  return out;
}

Vec nabla(const Connection& conn, const Vec& w, const Vec& u) {
  check_group(conn, w, "nabla");
  check_group(conn, u, "nabla");
  switch (conn.kind) {
    case ConnectionKind::GeneralLeftInvariant: {
      const Vec correction =
          ad_star(conn.group, w, conn.metric.lower(u)) +
          ad_star(conn.group, u, conn.metric.lower(w));
      return 0.5 * bracket(conn.group, w, u) - 0.5 * conn.metric.raise(correction);
    }
    case ConnectionKind::SE3Closed: {
      const Eigen::Vector3d a = w.head<3>(), b = w.tail<3>();
      const Eigen::Vector3d c = u.head<3>(), d = u.tail<3>();
      const Eigen::Vector3d J = conn.metric.diag.head<3>();
      const Eigen::Vector3d M = conn.metric.diag.tail<3>();
      const Eigen::Vector3d rot =
          0.5 * (a.cross(c) +
                 (a.cross(Eigen::Vector3d(J.cwiseProduct(c))) +
                  b.cross(Eigen::Vector3d(M.cwiseProduct(d))) +
                  c.cross(Eigen::Vector3d(J.cwiseProduct(a))) +
                  d.cross(Eigen::Vector3d(M.cwiseProduct(b))))
                     .cwiseQuotient(J));
      const Eigen::Vector3d trans =
          0.5 * (b.cross(c) + a.cross(d) +
                 (a.cross(Eigen::Vector3d(M.cwiseProduct(d))) +
                  c.cross(Eigen::Vector3d(M.cwiseProduct(b))))
                     .cwiseQuotient(M));
      Vec out(6);
      out << rot, trans;
      return out;
    }
    case ConnectionKind::SE3Unit: {
      const Eigen::Vector3d a = w.head<3>();
      const Eigen::Vector3d c = u.head<3>(), d = u.tail<3>();
      Vec out(6);
      out << 0.5 * a.cross(c), a.cross(d);
      return out;
    }
    case ConnectionKind::SE2Closed: {
      Vec out = Vec::Zero(3);
      out.tail<2>() = -w[0] * jmul(u.tail<2>());
      return out;
    }
    case ConnectionKind::BiInvariant:
      return 0.5 * bracket(conn.group, w, u);
  }
  throw std::logic_error("unknown connection kind");
}

Vec curvature(const Connection& conn, const Vec& u, const Vec& w, const Vec& z) {
  switch (conn.kind) {
    case ConnectionKind::SE3Unit: {
      const Eigen::Vector3d a = u.head<3>(), c = w.head<3>(), h = z.head<3>();
      Vec out = Vec::Zero(6);
      out.head<3>() = -0.25 * (a.cross(c)).cross(h);
      return out;
    }
    case ConnectionKind::SE2Closed:
      check_group(conn, z, "curvature");
      return Vec::Zero(3);
    case ConnectionKind::BiInvariant:
      return -0.25 * bracket(conn.group, bracket(conn.group, u, w), z);
    case ConnectionKind::GeneralLeftInvariant:
    case ConnectionKind::SE3Closed:
      return curvature_oracle(conn, u, w, z);
  }
  throw std::logic_error("unknown connection kind");
}

Vec curvature_oracle(const Connection& conn, const Vec& u, const Vec& w, const Vec& z) {
  return nabla(conn, u, nabla(conn, w, z)) - nabla(conn, w, nabla(conn, u, z)) -
         nabla(conn, bracket(conn.group, u, w), z);
}

CovariantDerivs covariant_chain(const Connection& conn, const Vec& v, const Vec& v1,
                                const Vec& v2, const Vec& v3) {
  CovariantDerivs d;
  const Vec nvv = nabla(conn, v, v);
  d.d2 = v1 + nvv;
  d.d3 = v2 + nabla(conn, v1, v) + 2.0 * nabla(conn, v, v1) + nabla(conn, v, nvv);
  d.d4 = v3 + nabla(conn, v2, v) + 3.0 * nabla(conn, v1, v1) + 3.0 * nabla(conn, v, v2) +
         nabla(conn, v1, nvv) + 2.0 * nabla(conn, v, nabla(conn, v1, v)) +
         3.0 * nabla(conn, v, nabla(conn, v, v1)) + nabla(conn, v, nabla(conn, v, nvv));
  return d;
}

}  // namespace geospline
