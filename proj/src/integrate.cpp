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

#include "geospline/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geospline/lie_groups.hpp"

namespace geospline {

namespace {

// Chain variables bundled for the RK4 stage arithmetic.
struct Chain {
  Vec v, v1, v2, lambda;
};

Chain chain_of(const ExtremalState& s) { return {s.v, s.v1, s.v2, s.lambda}; }

Chain axpy(const Chain& y, double a, const Chain& k) {
  Chain out;
  out.v = y.v + a * k.v;
  out.v1 = y.v1 + a * k.v1;
  out.v2 = y.v2 + a * k.v2;
  out.lambda = y.lambda.size() ? Vec(y.lambda + a * k.lambda) : y.lambda;
  return out;
}

// Chain derivative at a stage: d/dt (v, v', v'', lambda) = (v', v'', v''', lambda').
Chain derivative(const GroupElement& x, const Chain& y, const RhsFn& rhs) {
  ExtremalState s;
  s.x = x;
  s.v = y.v;
  s.v1 = y.v1;
  s.v2 = y.v2;
  s.lambda = y.lambda;
  StateDerivs d = rhs(s);
  Chain out;
  out.v = y.v1;
  out.v1 = y.v2;
  out.v2 = std::move(d.v3);
  out.lambda = std::move(d.lambda_dot);
  return out;
}

}  // namespace

const char* scheme_name(Scheme s) {
  return s == Scheme::SemiImplicitEuler ? "semi_implicit_euler" : "rk4";
}

ExtremalState step(const ExtremalState& s, double h, const RhsFn& rhs, Scheme scheme) {
  if (h == 0.0) return s;
  ExtremalState out;
  out.x = s.x;
  switch (scheme) {
    case Scheme::SemiImplicitEuler: {
      const StateDerivs d = rhs(s);
      out.v2 = s.v2 + h * d.v3;
      out.v1 = s.v1 + h * out.v2;
      out.v = s.v + h * out.v1;
      out.lambda = s.lambda.size() ? Vec(s.lambda + h * d.lambda_dot) : s.lambda;
      out.x = compose(s.x, exp(s.x.group, h * out.v));
      break;
    }
    case Scheme::RK4: {
      const Chain y = chain_of(s);
      const Chain k1 = derivative(s.x, y, rhs);
      const Chain k2 = derivative(s.x, axpy(y, 0.5 * h, k1), rhs);
      const Chain k3 = derivative(s.x, axpy(y, 0.5 * h, k2), rhs);
      const Chain k4 = derivative(s.x, axpy(y, h, k3), rhs);
      out.v = s.v + (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
      out.v1 = s.v1 + (h / 6.0) * (k1.v1 + 2.0 * k2.v1 + 2.0 * k3.v1 + k4.v1);
      out.v2 = s.v2 + (h / 6.0) * (k1.v2 + 2.0 * k2.v2 + 2.0 * k3.v2 + k4.v2);
      out.lambda = s.lambda.size()
                       ? Vec(s.lambda + (h / 6.0) * (k1.lambda + 2.0 * k2.lambda +
                                                     2.0 * k3.lambda + k4.lambda))
                       : s.lambda;
      // Pose reconstruction from the stage-averaged velocity: the stage
      // values of v are y.v, y.v + h/2 k1.v, y.v + h/2 k2.v, y.v + h k3.v,
      // and their 1-2-2-1 average collapses to this.
      const Vec v_stage_avg = y.v + (h / 6.0) * (k1.v + k2.v + k3.v);
      out.x = compose(s.x, exp(s.x.group, h * v_stage_avg));
      break;
    }
  }
  return out;
}

Trajectory integrate_segment(const ExtremalState& s0, double t0, double t1, double h,
                             const RhsFn& rhs, Scheme scheme,
                             const std::vector<Obstacle>& monitor) {
  if (h <= 0.0) throw ValidationError("integration step must be positive");
  if (t1 < t0) throw ValidationError("integration interval is reversed");

  Trajectory traj;
  traj.scheme = scheme;
  traj.step_size = h;
  traj.clearance_min.assign(monitor.size(), std::numeric_limits<double>::infinity());

  auto record = [&](double t, const ExtremalState& s) {
    for (size_t i = 0; i < monitor.size(); ++i) {
      const double f = obstacle_clearance(monitor[i], s.x);
      if (f <= kInsideMargin) {
        throw InsideObstacleError("trajectory sample at t = " + std::to_string(t) +
                                      " is inside obstacle #" + std::to_string(i),
                                  static_cast<int>(i), f, t);
      }
      traj.clearance_min[i] = std::min(traj.clearance_min[i], f);
    }
    traj.times.push_back(t);
    traj.states.push_back(s);
  };

  ExtremalState s = s0;
  record(t0, s);

  const double span = t1 - t0;
  const auto n_full = static_cast<long>(std::floor(span / h + 1e-9));
  for (long k = 1; k <= n_full; ++k) {
    double t = t0 + static_cast<double>(k) * h;
    double dt = h;
    try {
      s = step(s, dt, rhs, scheme);
    } catch (InsideObstacleError& e) {
      throw InsideObstacleError(std::string(e.what()) + " during step ending at t = " +
                                    std::to_string(t),
                                e.obstacle_index, e.f_value, t);
    }
    record(t, s);
  }
  const double remainder = span - static_cast<double>(n_full) * h;
  if (remainder > 1e-12) {
    try {
      s = step(s, remainder, rhs, scheme);
    } catch (InsideObstacleError& e) {
      throw InsideObstacleError(std::string(e.what()) + " during final partial step",
                                e.obstacle_index, e.f_value, t1);
    }
    record(t1, s);
  }
  return traj;
}

}  // namespace geospline
