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

#include "geospline/lie_groups.hpp"

#include <cmath>

namespace geospline {

namespace {

constexpr double kSmallAngle = 1e-4;   // below this, use series coefficients
constexpr double kBranchGuard = 1e-6;  // log refuses angles within this of pi
constexpr double kAlgebraTol = 1e-12;  // vee membership tolerance

Eigen::Matrix3d skew3(const Eigen::Vector3d& a) {
  Eigen::Matrix3d K;
  K << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  return K;
}

// Quarter-turn map J x = (x2, -x1), the 2-d analogue of the cross product.
Eigen::Vector2d jmul(const Eigen::Vector2d& x) { return {x.y(), -x.x()}; }

void check_dim(Group g, const Vec& xi, const char* op) {
  if (xi.size() != algebra_dim(g)) {
    throw std::invalid_argument(std::string(op) + ": algebra vector has dimension " +
                                std::to_string(xi.size()) + ", expected " +
                                std::to_string(algebra_dim(g)) + " for " + group_name(g));
  }
}

// Rodrigues coefficients A = sin(t)/t and B = (1-cos(t))/t^2 with series
// fallbacks, plus C = (t-sin(t))/t^3 for the translation propagator.
struct RotCoeffs {
  double A, B, C;
};

RotCoeffs rot_coeffs(double theta) {
  RotCoeffs c;
  const double t2 = theta * theta;
  if (theta < kSmallAngle) {
    c.A = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    c.B = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    c.C = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  } else {
    c.A = std::sin(theta) / theta;
    // 2 sin^2(t/2) instead of 1 - cos(t): the subtraction loses eps/t^2
    // absolute accuracy just above the series switch, and B is applied to
    // matrices of norm t, so that loss would surface in translations.
    const double half_sin = std::sin(0.5 * theta);
    c.B = 2.0 * half_sin * half_sin / t2;
    c.C = (theta - std::sin(theta)) / (t2 * theta);
  }
  return c;
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const RotCoeffs c = rot_coeffs(theta);
  const Eigen::Matrix3d K = skew3(omega);
  return Eigen::Matrix3d::Identity() + c.A * K + c.B * K * K;
}

// Left Jacobian of SO(3): exp(hat(w + dw)) = exp(hat(w)) exp(hat(Vinv ...)),
// used to map translation coordinates through the exponential.
Eigen::Matrix3d left_jacobian_so3(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const RotCoeffs c = rot_coeffs(theta);
  const Eigen::Matrix3d K = skew3(omega);
  return Eigen::Matrix3d::Identity() + c.B * K + c.C * K * K;
}

Eigen::Matrix3d left_jacobian_inv_so3(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const Eigen::Matrix3d K = skew3(omega);
  double c2;
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    c2 = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    c2 = 1.0 / (theta * theta) -
         (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  return Eigen::Matrix3d::Identity() - 0.5 * K + c2 * K * K;
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& R) {
  const double cos_theta = std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  if (theta >= M_PI - kBranchGuard) {
    throw SingularLogError("rotation angle " + std::to_string(theta) +
                           " is within 1e-6 of pi; principal logarithm undefined");
  }
  Eigen::Vector3d w;
  w << R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1);
  if (theta < kSmallAngle) {
    // w = 2 sin(theta) * axis; theta/sin(theta) ~ 1 + t^2/6 + 7 t^4/360.
    const double t2 = theta * theta;
    return 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * w;
  }
  return (theta / (2.0 * std::sin(theta))) * w;
}

}  // namespace

Vec basis_vector(Group g, int i) {
  Vec e = Vec::Zero(algebra_dim(g));
  e[i] = 1.0;
  return e;
}

Mat hat(Group g, const Vec& xi) {
  check_dim(g, xi, "hat");
  switch (g) {
    case Group::SO3:
      return skew3(xi.head<3>());
    case Group::SE2: {
      Mat M = Mat::Zero(3, 3);
      M(0, 1) = -xi[0];
      M(1, 0) = xi[0];
      M(0, 2) = xi[1];
      M(1, 2) = xi[2];
      return M;
    }
    case Group::SE3: {
      Mat M = Mat::Zero(4, 4);
      M.topLeftCorner<3, 3>() = skew3(xi.head<3>());
      M.topRightCorner<3, 1>() = xi.tail<3>();
      return M;
    }
  }
  throw std::invalid_argument("unknown group tag");
}

Vec vee(Group g, const Mat& M) {
  const int n = matrix_dim(g);
  if (M.rows() != n || M.cols() != n) {
    throw std::invalid_argument("vee: matrix has wrong dimensions for group");
  }
  const int nr = g == Group::SE2 ? 2 : 3;
  const Mat A = M.topLeftCorner(nr, nr);
  if ((A + A.transpose()).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw std::invalid_argument("vee: rotation block is not skew-symmetric");
  }
  if (g != Group::SO3 &&
      M.bottomRows(1).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw std::invalid_argument("vee: bottom row of homogeneous matrix is not zero");
  }
  Vec xi(algebra_dim(g));
  switch (g) {
    case Group::SO3:
      xi << M(2, 1), M(0, 2), M(1, 0);
      break;
    case Group::SE2:
      xi << M(1, 0), M(0, 2), M(1, 2);
      break;
    case Group::SE3:
      xi << M(2, 1), M(0, 2), M(1, 0), M(0, 3), M(1, 3), M(2, 3);
      break;
  }
  return xi;
}

Vec bracket(Group g, const Vec& u, const Vec& w) {
  check_dim(g, u, "bracket");
  check_dim(g, w, "bracket");
  Vec out(algebra_dim(g));
  switch (g) {
    case Group::SO3:
      out = u.head<3>().cross(w.head<3>());
      break;
    case Group::SE2: {
      const Eigen::Vector2d b = u.tail<2>(), d = w.tail<2>();
      out[0] = 0.0;
      out.tail<2>() = -u[0] * jmul(d) + w[0] * jmul(b);
      break;
    }
    case Group::SE3: {
      const Eigen::Vector3d a = u.head<3>(), b = u.tail<3>();
      const Eigen::Vector3d c = w.head<3>(), d = w.tail<3>();
      out.head<3>() = a.cross(c);
      out.tail<3>() = a.cross(d) - c.cross(b);
      break;
    }
  }
  return out;
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
  if (g1.group != g2.group) {
    throw std::invalid_argument("compose: mismatched group tags");
  }
  GroupElement out;
  out.group = g1.group;
  out.R = g1.R * g2.R;
  out.r = g1.group == Group::SO3 ? Vec::Zero(0) : Vec(g1.R * g2.r + g1.r);
  return out;
}

GroupElement inverse(const GroupElement& g) {
  GroupElement out;
  out.group = g.group;
  out.R = g.R.transpose();
  out.r = g.group == Group::SO3 ? Vec::Zero(0) : Vec(-(out.R * g.r));
  return out;
}

GroupElement exp(Group g, const Vec& xi) {
  check_dim(g, xi, "exp");
  GroupElement out;
  out.group = g;
  switch (g) {
    case Group::SO3:
      out.R = exp_so3(xi.head<3>());
      out.r = Vec::Zero(0);
      break;
    case Group::SE2: {
      const double theta = xi[0];
      const double ct = std::cos(theta), st = std::sin(theta);
      out.R = Mat(2, 2);
      out.R << ct, -st, st, ct;
      const RotCoeffs c = rot_coeffs(std::abs(theta));
      // V = (sin t / t) I + ((1 - cos t)/t) E with E the CCW quarter turn.
      Eigen::Matrix2d V;
      const double s = c.A, t = c.B * theta;
      V << s, -t, t, s;
      out.r = V * xi.tail<2>();
      break;
    }
    case Group::SE3:
      out.R = exp_so3(xi.head<3>());
      out.r = left_jacobian_so3(xi.head<3>()) * xi.tail<3>();
      break;
  }
  return out;
}

Vec log(const GroupElement& g) {
  Vec xi(algebra_dim(g.group));
  switch (g.group) {
    case Group::SO3:
      xi = log_so3(g.R);
      break;
    case Group::SE2: {
      const double theta = std::atan2(g.R(1, 0), g.R(0, 0));
      if (std::abs(theta) >= M_PI - kBranchGuard) {
        throw SingularLogError("planar rotation angle is within 1e-6 of pi; "
                               "principal logarithm undefined");
      }
      const RotCoeffs c = rot_coeffs(std::abs(theta));
      const double s = c.A, t = c.B * theta;
      // Inverse of V = s I + t E: (s I - t E) / (s^2 + t^2).
      const double den = s * s + t * t;
      Eigen::Matrix2d Vinv;
      Vinv << s / den, t / den, -t / den, s / den;
      xi[0] = theta;
      xi.tail<2>() = Vinv * g.r.head<2>();
      break;
    }
    case Group::SE3: {
      const Eigen::Vector3d omega = log_so3(g.R);
      xi.head<3>() = omega;
      xi.tail<3>() = left_jacobian_inv_so3(omega) * g.r.head<3>();
      break;
    }
  }
  return xi;
}

Vec adjoint(const GroupElement& g, const Vec& xi) {
  check_dim(g.group, xi, "adjoint");
  Vec out(xi.size());
  switch (g.group) {
    case Group::SO3:
      out = g.R * xi;
      break;
    case Group::SE2: {
      out[0] = xi[0];
      const Eigen::Vector2d r2 = g.r.head<2>();
      out.tail<2>() = g.R * xi.tail<2>() + xi[0] * jmul(r2);
      break;
    }
    case Group::SE3: {
      const Eigen::Vector3d a = xi.head<3>(), b = xi.tail<3>();
      const Eigen::Vector3d Ra = g.R * a;
      out.head<3>() = Ra;
      out.tail<3>() = g.R * b - Ra.cross(Eigen::Vector3d(g.r.head<3>()));
      break;
    }
  }
  return out;
}

double inner(const Vec& u, const Vec& w, const MetricTensor& metric) {
  if (u.size() != metric.diag.size() || w.size() != metric.diag.size()) {
    throw std::invalid_argument("inner: dimension mismatch with metric");
  }
  return u.dot(metric.diag.cwiseProduct(w));
}

double metric_norm(const Vec& u, const MetricTensor& metric) {
  return std::sqrt(inner(u, u, metric));
}

}  // namespace geospline
