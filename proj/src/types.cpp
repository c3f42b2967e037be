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

#include "geospline/types.hpp"

namespace geospline {

int algebra_dim(Group g) {
  switch (g) {
    case Group::SO3: return 3;
    case Group::SE2: return 3;
    case Group::SE3: return 6;
  }
  throw std::invalid_argument("unknown group tag");
}

int rot_dim(Group g) { return g == Group::SE2 ? 1 : 3; }

int trans_dim(Group g) {
  switch (g) {
    case Group::SO3: return 0;
    case Group::SE2: return 2;
    case Group::SE3: return 3;
  }
  throw std::invalid_argument("unknown group tag");
}

int matrix_dim(Group g) { return g == Group::SE3 ? 4 : 3; }

const char* group_name(Group g) {
  switch (g) {
    case Group::SO3: return "SO3";
    case Group::SE2: return "SE2";
    case Group::SE3: return "SE3";
  }
  return "?";
}

GroupElement GroupElement::identity(Group g) {
  GroupElement e;
  e.group = g;
  e.R = Mat::Identity(g == Group::SE2 ? 2 : 3, g == Group::SE2 ? 2 : 3);
  e.r = Vec::Zero(trans_dim(g));
  return e;
}

GroupElement GroupElement::from_parts(Group g, const Mat& R, const Vec& r) {
  const int nr = g == Group::SE2 ? 2 : 3;
  if (R.rows() != nr || R.cols() != nr) {
    throw std::invalid_argument("rotation block has wrong dimensions for group");
  }
  if (r.size() != trans_dim(g)) {
    throw std::invalid_argument("translation part has wrong dimension for group");
  }
  GroupElement e;
  e.group = g;
  e.R = R;
  e.r = r;
  return e;
}

double GroupElement::orthogonality_drift() const {
  return (R.transpose() * R - Mat::Identity(R.rows(), R.cols())).norm();
}

MetricTensor MetricTensor::identity(Group g) {
  MetricTensor m;
  m.group = g;
  m.diag = Vec::Ones(algebra_dim(g));
  return m;
}

MetricTensor MetricTensor::so3(const Eigen::Vector3d& J) {
  MetricTensor m;
  m.group = Group::SO3;
  m.diag = J;
  m.validate();
  return m;
}

MetricTensor MetricTensor::se2(double J, double mass) {
  MetricTensor m;
  m.group = Group::SE2;
  m.diag = Vec(3);
  m.diag << J, mass, mass;
  m.validate();
  return m;
}

MetricTensor MetricTensor::se3(const Eigen::Vector3d& J, const Eigen::Vector3d& mass) {
  MetricTensor m;
  m.group = Group::SE3;
  m.diag = Vec(6);
  m.diag << J, mass;
  m.validate();
  return m;
}

Vec MetricTensor::lower(const Vec& u) const { return diag.cwiseProduct(u); }

Vec MetricTensor::raise(const Vec& mu) const { return mu.cwiseQuotient(diag); }

bool MetricTensor::is_identity(double tol) const {
  return (diag.array() - 1.0).abs().maxCoeff() <= tol;
}

void MetricTensor::validate() const {
  if (diag.size() != algebra_dim(group)) {
    throw ValidationError("metric diagonal has wrong dimension for group");
  }
  if ((diag.array() <= 0.0).any()) {
    throw ValidationError("metric diagonal entries must be positive");
  }
  if (group == Group::SE2 && diag[1] != diag[2]) {
    throw ValidationError("SE2 metric must weight both translations equally");
  }
}

}  // namespace geospline
