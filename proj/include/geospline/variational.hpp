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

#include <cstdint>

#include "geospline/shooting.hpp"

namespace geospline {

/// Discrete action of a pose path: quadrature of
///   1/2 (||D^2 x||^2 + sigma ||v||^2 + sum V_r(x)),
/// composite Simpson on uniform sample grids and trapezoid otherwise.
/// The body velocity is recomputed from pose differences
/// (v_k = log(x_{k-1}^-1 x_{k+1}) / (t_{k+1} - t_{k-1}), second-order
/// one-sided at the ends) and D^2 x = dv/dt + nabla_v v uses matching
/// differences of that v, so the value is independent of any solver state.
/// Throws InsideObstacleError if a sample penetrates an obstacle.
double functional_J(const std::vector<double>& times,
                    const std::vector<GroupElement>& poses, double sigma,
                    const std::vector<Obstacle>& obstacles, const Connection& conn);

double functional_J(const Trajectory& traj, double sigma,
                    const std::vector<Obstacle>& obstacles, const Connection& conn);

/// Same action, but evaluated leg by leg between consecutive split times
/// (normally the interpolation knots, which must coincide with samples) and
/// summed. Extremals have jerk jumps at the knots; differencing across them
/// costs an O(h^2) term with a jump-sized constant, and the split keeps
/// every stencil inside one smooth leg.
double functional_J(const std::vector<double>& times,
                    const std::vector<GroupElement>& poses, double sigma,
                    const std::vector<Obstacle>& obstacles, const Connection& conn,
                    const std::vector<double>& splits);

/// Quadrature of lambda(t) * v_idx(t) (same rule and pose-derived velocity
/// as the action); the multiplier term that extends the action for
/// constrained problems.
double constraint_term(const std::vector<double>& times,
                       const std::vector<GroupElement>& poses,
                       const std::vector<double>& lambda_series, int coordinate,
                       const Connection& conn);

/// Split form of the multiplier term, matching the split action.
double constraint_term(const std::vector<double>& times,
                       const std::vector<GroupElement>& poses,
                       const std::vector<double>& lambda_series, int coordinate,
                       const Connection& conn, const std::vector<double>& splits);

/// A variation direction: per segment a fixed algebra vector scaled by a
/// quartic bump that vanishes to first order at the segment ends, so knots
/// and boundary data stay fixed and the perturbed path remains C1 there.
struct PerturbationField {
  std::vector<Vec> seg_directions;

  /// Evaluate the field at time t (knot list supplies the segment bounds).
  Vec at(double t, const std::vector<Knot>& knots) const;
};

struct StationarityOptions {
  int n_dirs = 50;
  double eps = 1e-4;
  double h_fine = 1e-3;
  Scheme scheme = Scheme::RK4;
  std::uint64_t seed = 20260821ull;
  int max_rescales = 5;  // per direction, when a perturbed path hits an obstacle
};

/// Max over random directions of |J(gamma_eps) - J(gamma_-eps)| / (2 eps)
/// for the action (extended by the multiplier term when constrained), where
/// gamma_eps perturbs the re-integrated fine path by eps * field. The
/// solution is re-integrated at h_fine and h_fine/2 and each directional
/// difference is Richardson-combined across the pair, cancelling the
/// discrete action's O(h^2) stencil bias. Near zero for genuine extremals;
/// order one for impostors.
double stationarity_test(const Solution& sol, const ProblemSpec& p, int n_dirs,
                         double eps);

double stationarity_test(const Solution& sol, const ProblemSpec& p,
                         const StationarityOptions& opts);

/// Same sweep on an explicitly given pose path (no solution object), used
/// for negative controls. The path must sample every knot time exactly.
/// When the samples are uniform within legs with even panel counts, the
/// same two-grid extrapolation runs against the stride-2 subsample.
double stationarity_of_path(const std::vector<double>& times,
                            const std::vector<GroupElement>& poses,
                            const ProblemSpec& p, const StationarityOptions& opts);

}  // namespace geospline
