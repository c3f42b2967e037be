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

#include <optional>
#include <string>
#include <vector>

#include "geospline/integrate.hpp"

namespace geospline {

/// An interpolation target: be at `pose` when t = `t`.
struct Knot {
  double t = 0.0;
  GroupElement pose;
};

struct SolverOptions {
  double h = 0.01;
  int max_newton_iters = 100;
  double residual_tol = 1e-8;
  double fd_epsilon = 1e-6;
  int max_backtracks = 30;
  Scheme scheme = Scheme::SemiImplicitEuler;
};

/// Full boundary-value problem: interpolate the knots (first entry at t = 0
/// is the start pose, last is the terminal pose) with prescribed body
/// boundary velocities, avoiding the obstacles, under tension sigma.
struct ProblemSpec {
  Group group = Group::SE3;
  MetricTensor metric;
  double sigma = 0.0;
  std::vector<Obstacle> obstacles;
  std::vector<Knot> knots;
  Vec v0, vN;
  std::optional<ConstraintSpec> constraints;
  SolverOptions solver;

  int segments() const { return static_cast<int>(knots.size()) - 1; }
  double horizon() const { return knots.back().t; }
  bool constrained() const { return constraints.has_value() && constraints->count() > 0; }

  /// Structural checks (throws ValidationError): knot ordering from t = 0,
  /// dimensions, metric positivity, every knot strictly outside every
  /// obstacle, supported constraint shape, solver parameter sanity. Boundary
  /// velocities violating the constraint are projected onto it; each
  /// projection is reported in the returned warning list.
  std::vector<std::string> validate_and_project();
};

/// Shooting unknowns. Constrained problems carry only the distribution
/// components of the velocity chain (the constrained coordinates stay zero
/// along the flow) plus one multiplier start per segment.
struct Unknowns {
  Vec v1_0, v2_0;                  // initial v', v'' (reduced when constrained)
  std::vector<Vec> jerk_restarts;  // v'' restart per interior knot (reduced)
  Vec lambda0;                     // multiplier start per segment (empty unconstrained)

  Vec pack() const;
  static Unknowns unpack(const Vec& packed, const ProblemSpec& p);
  static int packed_size(const ProblemSpec& p);
};

struct Solution {
  enum class Status { Converged, NoConvergence };

  Status status = Status::NoConvergence;
  Trajectory trajectory;  // best iterate, stitched across segments
  Unknowns unknowns;
  double residual_norm = std::numeric_limits<double>::infinity();
  int newton_iters = 0;
  int penalized_evals = 0;  // residual evaluations that hit an obstacle / branch cut
  std::vector<double> knot_jerk_jumps;  // ||v''(T_i+) - v''(T_i-)|| per interior knot
  std::vector<double> clearance_min;    // per obstacle, over the whole trajectory
  std::optional<double> max_abnormal_residual;  // constrained problems only
  std::vector<std::string> warnings;

  bool converged() const { return status == Status::Converged; }
};

/// Residual map of the multi-segment shot: per interior knot the log of the
/// pose error, then the terminal pose log error and the terminal velocity
/// mismatch (distribution components only when constrained). Expects a
/// ProblemSpec that already passed validate_and_project(). Evaluations that
/// penetrate an obstacle or leave the log's principal branch return a large
/// penalty vector whose norm shrinks as the failure time approaches the
/// horizon, steering the Newton iteration back to feasibility.
Vec residuals(const Unknowns& u, const ProblemSpec& p);

/// Zero jerks and multipliers; v'(0) from the chord to the first knot:
/// v'(0) = 2 (d0 - v(0)) / T1 with d0 = log(x0^-1 x1) / T1.
Unknowns initial_guess(const ProblemSpec& p);

/// Damped Newton on the shooting residuals with a forward-difference
/// Jacobian (columns evaluated concurrently, capped by GEOSPLINE_THREADS).
/// Returns the best iterate with diagnostics even when not converged;
/// throws InsideObstacleError only if the best iterate cannot be integrated
/// to the horizon at all.
Solution solve(const ProblemSpec& p, const std::optional<Unknowns>& guess = {});

/// Concurrency cap honoring the GEOSPLINE_THREADS environment variable.
int thread_cap();

/// The right-hand side a problem induces: the general assembly for
/// unconstrained problems, the unicycle specialization when constrained.
RhsFn problem_rhs(const ProblemSpec& p);

/// Re-run a solution's unknowns through the integrator at a different
/// resolution or scheme (for refinement studies and stationarity checks).
/// Throws InsideObstacleError if the finer path penetrates an obstacle.
Trajectory reintegrate(const Solution& sol, const ProblemSpec& p, double h, Scheme scheme);

}  // namespace geospline
