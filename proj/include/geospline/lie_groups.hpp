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

/// Algebra coordinates -> homogeneous matrix representation.
/// so(3): 3x3 skew. se(2): [[0,-a,b1],[a,0,b2],[0,0,0]]. se(3): 4x4 with the
/// skew of the rotational part top-left and the translational part top-right.
Mat hat(Group g, const Vec& xi);

/// Inverse of hat. Checks membership of the algebra (skew-symmetry of the
/// rotation block, zero bottom row) within 1e-12 and throws
/// std::invalid_argument on violation.
Vec vee(Group g, const Mat& M);

/// Lie bracket in algebra coordinates. Closed forms:
///   so(3): a x c
///   se(2): (0, -a*Jd + c*Jb)            with J the quarter-turn [[0,1],[-1,0]]
///   se(3): (a x c, a x d - c x b)
Vec bracket(Group g, const Vec& u, const Vec& w);

/// Group product g1 * g2.
GroupElement compose(const GroupElement& g1, const GroupElement& g2);

GroupElement inverse(const GroupElement& g);

/// Exponential map with closed forms (Rodrigues on the rotation block, exact
/// translation propagator) and series fallbacks below angle 1e-4.
GroupElement exp(Group g, const Vec& xi);

/// Principal-branch logarithm. Throws SingularLogError when the rotation
/// angle is within 1e-6 of pi.
Vec log(const GroupElement& g);

/// Adjoint action Ad_g(xi).
Vec adjoint(const GroupElement& g, const Vec& xi);

/// Metric inner product <u, w> = u^T diag(I) w.
double inner(const Vec& u, const Vec& w, const MetricTensor& metric);

double metric_norm(const Vec& u, const MetricTensor& metric);

/// i-th coordinate basis vector of the algebra.
Vec basis_vector(Group g, int i);

}  // namespace geospline
