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

#include <random>

#include <Eigen/Dense>

#include "geospline/lie_groups.hpp"
#include "geospline/types.hpp"

namespace geospline::testutil {

/// Matrix exponential by truncated power series. Deliberately naive so it is
/// independent of the Rodrigues / propagator closed forms under test.
inline Mat exp_series(const Mat& A, int terms = 30) {
  Mat out = Mat::Identity(A.rows(), A.cols());
  Mat term = Mat::Identity(A.rows(), A.cols());
  for (int k = 1; k <= terms; ++k) {
    term = (term * A) / static_cast<double>(k);
    out += term;
  }
  return out;
}

/// Homogeneous matrix of a group element (3x3 for SO(3)/SE(2), 4x4 for SE(3)).
inline Mat hom(const GroupElement& g) {
  if (g.group == Group::SO3) return g.R;
  const int d = trans_dim(g.group);
  Mat H = Mat::Identity(d + 1, d + 1);
  H.topLeftCorner(d, d) = g.R;
  H.topRightCorner(d, 1) = g.r;
  return H;
}

inline GroupElement from_hom(Group g, const Mat& H) {
  if (g == Group::SO3) return GroupElement::from_parts(g, H, Vec::Zero(0));
  const int d = trans_dim(g);
  return GroupElement::from_parts(g, H.topLeftCorner(d, d), H.topRightCorner(d, 1));
}

/// Algebra vector with each coordinate uniform in [-1, 1], then the
/// rotational block rescaled so its norm stays below rot_cap (keeps random
/// elements away from the log branch cut at angle pi).
inline Vec random_algebra(Group g, std::mt19937_64& rng, double rot_cap = 2.5,
                          double trans_cap = 3.0) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec xi(algebra_dim(g));
  for (int i = 0; i < xi.size(); ++i) xi[i] = unit(rng);
  const int nr = rot_dim(g);
  const double rn = xi.head(nr).norm();
  if (rn > 0) xi.head(nr) *= rot_cap * std::abs(unit(rng)) / rn;
  if (trans_dim(g) > 0) xi.tail(trans_dim(g)) *= trans_cap;
  return xi;
}

inline GroupElement random_element(Group g, std::mt19937_64& rng) {
  return exp(g, random_algebra(g, rng));
}

inline bool approx(const Vec& a, const Vec& b, double tol) {
  return a.size() == b.size() && (a - b).norm() <= tol;
}

inline bool approx(const Mat& a, const Mat& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).norm() <= tol;
}

inline bool approx_elements(const GroupElement& a, const GroupElement& b, double tol) {
  return a.group == b.group && approx(a.R, b.R, tol) &&
         (trans_dim(a.group) == 0 || approx(a.r, b.r, tol));
}

}  // namespace geospline::testutil
