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

#include "geospline/potentials.hpp"

#include "geospline/lie_groups.hpp"

namespace geospline {

namespace {

Vec relative_log(const Obstacle& obs, const GroupElement& g) {
  return log(compose(inverse(g), obs.pose));
}

[[noreturn]] void throw_inside(const Obstacle& obs, double f, int index) {
  throw InsideObstacleError(std::string("configuration is inside obstacle") +
                                (index >= 0 ? " #" + std::to_string(index) : "") +
                                " (" + obs.kind_name() +
                                ", margin f = " + std::to_string(f) + ")",
                            index, f);
}

}  // namespace

Obstacle Obstacle::sphere(const Vec& center, double offset, double tau) {
  Obstacle o;
  o.kind = Kind::EuclideanSphere;
  o.center = center;
  o.offset = offset;
  o.tau = tau;
  return o;
}

Obstacle Obstacle::orientation(const GroupElement& Q, double tau) {
  Obstacle o;
  o.kind = Kind::OrientationPoint;
  o.pose = Q;
  o.tau = tau;
  return o;
}

Obstacle Obstacle::compact_point(const GroupElement& h, double tau) {
  Obstacle o;
  o.kind = Kind::CompactGroupPoint;
  o.pose = h;
  o.tau = tau;
  return o;
}

const char* Obstacle::kind_name() const {
  switch (kind) {
    case Kind::EuclideanSphere: return "sphere";
    case Kind::OrientationPoint: return "orientation";
    case Kind::CompactGroupPoint: return "compact_point";
  }
  return "?";
}

void Obstacle::validate(Group g) const {
  if (tau < 0.0) {
    throw ValidationError("obstacle weight tau must be nonnegative");
  }
  switch (kind) {
    case Kind::EuclideanSphere:
      if (g == Group::SO3) {
        throw ValidationError("sphere obstacles need a translational part; SO3 has none");
      }
      if (center.size() != trans_dim(g)) {
        throw ValidationError("sphere center dimension does not match group");
      }
      if (offset <= 0.0) {
        throw ValidationError("sphere offset (squared radius) must be positive");
      }
      break;
    case Kind::OrientationPoint:
    case Kind::CompactGroupPoint:
      if (g != Group::SO3) {
        throw ValidationError(std::string(kind_name()) +
                              " obstacles are defined on the compact group SO3 only");
      }
      if (pose.group != Group::SO3) {
        throw ValidationError("point obstacle pose must be an SO3 element");
      }
      break;
  }
}

double obstacle_clearance(const Obstacle& obs, const GroupElement& g) {
  switch (obs.kind) {
    case Obstacle::Kind::EuclideanSphere:
      return (g.r - obs.center).squaredNorm() - obs.offset;
    case Obstacle::Kind::OrientationPoint:
    case Obstacle::Kind::CompactGroupPoint:
      return relative_log(obs, g).squaredNorm();
  }
  throw std::logic_error("unknown obstacle kind");
}

double potential_value(const Obstacle& obs, const GroupElement& g, int obstacle_index) {
  const double f = obstacle_clearance(obs, g);
  if (f <= kInsideMargin) throw_inside(obs, f, obstacle_index);
  return obs.tau / f;
}

Vec potential_grad_body(const Obstacle& obs, const GroupElement& g, int obstacle_index) {
  const double f = obstacle_clearance(obs, g);
  if (f <= kInsideMargin) throw_inside(obs, f, obstacle_index);
  switch (obs.kind) {
    case Obstacle::Kind::EuclideanSphere: {
      Vec grad = Vec::Zero(algebra_dim(g.group));
      grad.tail(trans_dim(g.group)) =
          (-2.0 * obs.tau / (f * f)) * (g.R.transpose() * (g.r - obs.center));
      return grad;
    }
    case Obstacle::Kind::OrientationPoint:
    case Obstacle::Kind::CompactGroupPoint:
      return (2.0 * obs.tau / (f * f)) * relative_log(obs, g);
  }
  throw std::logic_error("unknown obstacle kind");
}

}  // namespace geospline
