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

#include "geospline/shooting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "geospline/lie_groups.hpp"

namespace geospline {

namespace {

constexpr double kPenaltyScale = 1e6;

// Indices of the velocity-chain coordinates that remain free unknowns.
std::vector<int> free_indices(const ProblemSpec& p) {
  const int n = algebra_dim(p.group);
  std::vector<int> free;
  if (!p.constrained()) {
    free.resize(n);
    for (int i = 0; i < n; ++i) free[i] = i;
    return free;
  }
  const auto& zero = p.constraints->zero_indices;
  for (int i = 0; i < n; ++i) {
    if (std::find(zero.begin(), zero.end(), i) == zero.end()) free.push_back(i);
  }
  return free;
}

Vec expand(const std::vector<int>& free, int n, const Vec& reduced) {
  Vec full = Vec::Zero(n);
  for (size_t i = 0; i < free.size(); ++i) full[free[i]] = reduced[static_cast<int>(i)];
  return full;
}

Vec reduce(const std::vector<int>& free, const Vec& full) {
  Vec red(static_cast<int>(free.size()));
  for (size_t i = 0; i < free.size(); ++i) red[static_cast<int>(i)] = full[free[i]];
  return red;
}

RhsFn make_rhs(const ProblemSpec& p) {
  if (p.constrained()) {
    const double J = p.metric.diag[0];
    const double m = p.metric.diag[1];
    const double sigma = p.sigma;
    const std::vector<Obstacle> obstacles = p.obstacles;
    return [J, m, sigma, obstacles](const ExtremalState& s) {
      return rhs_se2_unicycle(s, obstacles, sigma, m, J);
    };
  }
  const Connection conn = Connection::general(p.metric);
  const double sigma = p.sigma;
  const std::vector<Obstacle> obstacles = p.obstacles;
  return [conn, sigma, obstacles](const ExtremalState& s) {
    StateDerivs d;
    d.v3 = rhs_general(s, conn, obstacles, sigma);
    return d;
  };
}

struct ShotResult {
  Vec residual;
  bool penalized = false;
  double fail_time = 0.0;
  std::string fail_what;
  Trajectory trajectory;                // filled when keep_trajectory
  std::vector<double> knot_jerk_jumps;  // likewise
};

// Integrate the whole multi-segment shot. Residual layout: interior knot
// pose logs, terminal pose log, terminal velocity mismatch (reduced).
ShotResult shoot(const Unknowns& u, const ProblemSpec& p, const RhsFn& rhs,
                 bool keep_trajectory) {
  const int n = algebra_dim(p.group);
  const int N = p.segments();
  const auto free = free_indices(p);
  const int n_free = static_cast<int>(free.size());
  const int res_dim = N * n + n_free;
  const double T = p.horizon();

  ShotResult out;
  out.residual = Vec::Zero(res_dim);

  auto penalize = [&](double fail_time, const std::string& what) {
    out.penalized = true;
    out.fail_time = fail_time;
    out.fail_what = what;
    const double scale = kPenaltyScale * (1.0 + (T - fail_time) / T);
    out.residual = Vec::Constant(res_dim, scale / std::sqrt(static_cast<double>(res_dim)));
  };

  ExtremalState s;
  s.x = p.knots.front().pose;
  s.v = p.v0;
  s.v1 = expand(free, n, u.v1_0);
  s.v2 = expand(free, n, u.v2_0);
  if (p.constrained()) s.lambda = u.lambda0.segment(0, 1);

  int row = 0;
  for (int i = 0; i < N; ++i) {
    const double t0 = p.knots[i].t, t1 = p.knots[i + 1].t;
    Trajectory seg;
    try {
      seg = integrate_segment(s, t0, t1, p.solver.h, rhs, p.solver.scheme, p.obstacles);
    } catch (const InsideObstacleError& e) {
      penalize(e.time >= 0.0 ? e.time : t0, e.what());
      return out;
    }
    const ExtremalState& end = seg.states.back();

    Vec pose_err;
    try {
      pose_err = log(compose(inverse(p.knots[i + 1].pose), end.x));
    } catch (const SingularLogError& e) {
      penalize(t1, e.what());
      return out;
    }
    out.residual.segment(row, n) = pose_err;
    row += n;

    if (keep_trajectory) {
      const size_t skip = out.trajectory.times.empty() ? 0 : 1;
      out.trajectory.times.insert(out.trajectory.times.end(), seg.times.begin() + skip,
                                  seg.times.end());
      out.trajectory.states.insert(out.trajectory.states.end(), seg.states.begin() + skip,
                                   seg.states.end());
      if (out.trajectory.clearance_min.empty()) {
        out.trajectory.clearance_min = seg.clearance_min;
      } else {
        for (size_t k = 0; k < seg.clearance_min.size(); ++k) {
          out.trajectory.clearance_min[k] =
              std::min(out.trajectory.clearance_min[k], seg.clearance_min[k]);
        }
      }
      out.trajectory.scheme = seg.scheme;
      out.trajectory.step_size = seg.step_size;
    }

    if (i + 1 < N) {
      // Carry pose, velocity, and acceleration across the knot; restart the
      // jerk (and the multiplier) with their segment unknowns.
      ExtremalState next;
      next.x = end.x;
      next.v = end.v;
      next.v1 = end.v1;
      next.v2 = expand(free, n, u.jerk_restarts[static_cast<size_t>(i)]);
      if (p.constrained()) next.lambda = u.lambda0.segment(i + 1, 1);
      if (keep_trajectory) {
        out.knot_jerk_jumps.push_back((next.v2 - end.v2).norm());
      }
      s = next;
    } else {
      out.residual.segment(row, n_free) = reduce(free, Vec(end.v - p.vN));
      row += n_free;
    }
  }
  return out;
}

int env_thread_cap() {
  const char* env = std::getenv("GEOSPLINE_THREADS");
  if (env != nullptr) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed > 0) return static_cast<int>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Forward-difference Jacobian with columns distributed over worker threads.
Mat jacobian(const Vec& u_vec, const Vec& r0, const ProblemSpec& p, const RhsFn& rhs) {
  const int m = static_cast<int>(u_vec.size());
  const double eps = p.solver.fd_epsilon;
  Mat J(r0.size(), m);
  const int workers = std::min(thread_cap(), m);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  std::atomic<int> next_col{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int j = next_col.fetch_add(1); j < m; j = next_col.fetch_add(1)) {
        Vec u_j = u_vec;
        u_j[j] += eps;
        const ShotResult shot = shoot(Unknowns::unpack(u_j, p), p, rhs, false);
        J.col(j) = (shot.residual - r0) / eps;
      }
    });
  }
  for (auto& t : pool) t.join();
  return J;
}

}  // namespace

int thread_cap() { return env_thread_cap(); }

RhsFn problem_rhs(const ProblemSpec& p) { return make_rhs(p); }

Trajectory reintegrate(const Solution& sol, const ProblemSpec& p_in, double h,
                       Scheme scheme) {
  ProblemSpec p = p_in;
  p.validate_and_project();
  p.solver.h = h;
  p.solver.scheme = scheme;
  ShotResult shot = shoot(sol.unknowns, p, make_rhs(p), true);
  if (shot.penalized) {
    throw InsideObstacleError("re-integration failed: " + shot.fail_what, -1, 0.0,
                              shot.fail_time);
  }
  return shot.trajectory;
}

std::vector<std::string> ProblemSpec::validate_and_project() {
  std::vector<std::string> warnings;
  const int n = algebra_dim(group);

  metric.validate();
  if (metric.group != group) throw ValidationError("metric group tag mismatch");
  if (sigma < 0.0) throw ValidationError("tension sigma must be nonnegative");

  if (knots.size() < 2) throw ValidationError("need at least start and terminal knots");
  if (std::abs(knots.front().t) > 1e-12) {
    throw ValidationError("first knot must sit at t = 0");
  }
  knots.front().t = 0.0;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1].t <= knots[i].t) {
      throw ValidationError("knot times must be strictly increasing");
    }
  }
  for (size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].pose.group != group) {
      throw ValidationError("knot " + std::to_string(i) + " has wrong group tag");
    }
    if (knots[i].pose.orthogonality_drift() > 1e-8) {
      throw ValidationError("knot " + std::to_string(i) +
                            " rotation is not orthonormal within 1e-8");
    }
  }

  for (size_t j = 0; j < obstacles.size(); ++j) {
    obstacles[j].validate(group);
    for (size_t i = 0; i < knots.size(); ++i) {
      const double f = obstacle_clearance(obstacles[j], knots[i].pose);
      if (f <= kInsideMargin) {
        throw ValidationError("knot " + std::to_string(i) + " lies inside obstacle #" +
                              std::to_string(j) + " (margin f = " + std::to_string(f) +
                              "); the barrier makes this target unreachable");
      }
    }
  }

  if (v0.size() != n || vN.size() != n) {
    throw ValidationError("boundary velocities must have the algebra dimension");
  }
  if (constrained()) {
    if (group != Group::SE2 || constraints->zero_indices != std::vector<int>{2}) {
      throw ValidationError(
          "only the SE2 knife-edge constraint (third algebra coordinate zero) is supported");
    }
    constraints->validate(metric);
    for (Vec* bv : {&v0, &vN}) {
      for (int idx : constraints->zero_indices) {
        if ((*bv)[idx] != 0.0) {
          warnings.push_back("boundary velocity component " + std::to_string(idx) +
                             " = " + std::to_string((*bv)[idx]) +
                             " violates the constraint; projected to 0");
          (*bv)[idx] = 0.0;
        }
      }
    }
  }

  if (solver.h <= 0.0) throw ValidationError("solver step h must be positive");
  double min_seg = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    min_seg = std::min(min_seg, knots[i + 1].t - knots[i].t);
  }
  if (solver.h > min_seg) {
    throw ValidationError("solver step h exceeds the shortest segment length");
  }
  if (solver.residual_tol <= 0.0 || solver.fd_epsilon <= 0.0 ||
      solver.max_newton_iters < 1) {
    throw ValidationError("solver tolerances and iteration limit must be positive");
  }
  return warnings;
}

int Unknowns::packed_size(const ProblemSpec& p) {
  const int n_free = static_cast<int>(free_indices(p).size());
  const int N = p.segments();
  const int k = p.constrained() ? p.constraints->count() : 0;
  return (N + 1) * n_free + N * k;
}

Vec Unknowns::pack() const {
  int total = static_cast<int>(v1_0.size() + v2_0.size() + lambda0.size());
  for (const Vec& j : jerk_restarts) total += static_cast<int>(j.size());
  Vec out(total);
  int at = 0;
  auto put = [&](const Vec& v) {
    out.segment(at, v.size()) = v;
    at += static_cast<int>(v.size());
  };
  put(v1_0);
  put(v2_0);
  for (const Vec& j : jerk_restarts) put(j);
  put(lambda0);
  return out;
}

Unknowns Unknowns::unpack(const Vec& packed, const ProblemSpec& p) {
  const int n_free = static_cast<int>(free_indices(p).size());
  const int N = p.segments();
  const int k = p.constrained() ? p.constraints->count() : 0;
  if (packed.size() != packed_size(p)) {
    throw std::invalid_argument("packed unknown vector has wrong size");
  }
  Unknowns u;
  int at = 0;
  u.v1_0 = packed.segment(at, n_free);
  at += n_free;
  u.v2_0 = packed.segment(at, n_free);
  at += n_free;
  u.jerk_restarts.resize(static_cast<size_t>(N - 1));
  for (int i = 0; i < N - 1; ++i) {
    u.jerk_restarts[static_cast<size_t>(i)] = packed.segment(at, n_free);
    at += n_free;
  }
  u.lambda0 = packed.segment(at, N * k);
  return u;
}

Vec residuals(const Unknowns& u, const ProblemSpec& p) {
  return shoot(u, p, make_rhs(p), false).residual;
}

Unknowns initial_guess(const ProblemSpec& p) {
  const auto free = free_indices(p);
  const int n_free = static_cast<int>(free.size());
  const int N = p.segments();
  const double T1 = p.knots[1].t - p.knots[0].t;

  Unknowns u;
  u.v2_0 = Vec::Zero(n_free);
  u.jerk_restarts.assign(static_cast<size_t>(N - 1), Vec::Zero(n_free));
  u.lambda0 = Vec::Zero(p.constrained() ? N * p.constraints->count() : 0);

  const Vec d0 = log(compose(inverse(p.knots[0].pose), p.knots[1].pose)) / T1;
  u.v1_0 = reduce(free, Vec(2.0 * (d0 - p.v0) / T1));
  return u;
}

Solution solve(const ProblemSpec& p_in, const std::optional<Unknowns>& guess) {
  ProblemSpec p = p_in;
  Solution sol;
  sol.warnings = p.validate_and_project();

  const RhsFn rhs = make_rhs(p);
  Vec u = (guess ? *guess : initial_guess(p)).pack();
  if (u.size() != Unknowns::packed_size(p)) {
    throw ValidationError("initial guess has wrong unknown dimensions");
  }

  ShotResult shot = shoot(Unknowns::unpack(u, p), p, rhs, false);
  double rnorm = shot.residual.norm();
  if (shot.penalized) ++sol.penalized_evals;
  Vec best_u = u;
  double best_norm = rnorm;

  int iters = 0;
  while (iters < p.solver.max_newton_iters && rnorm > p.solver.residual_tol) {
    const Mat J = jacobian(u, shot.residual, p, rhs);
    const Vec delta = Eigen::ColPivHouseholderQR<Mat>(J).solve(-shot.residual);
    if (!delta.allFinite()) {
      sol.warnings.push_back("Newton step is not finite; stopping early");
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= p.solver.max_backtracks; ++bt) {
      const Vec u_trial = u + alpha * delta;
      const ShotResult trial = shoot(Unknowns::unpack(u_trial, p), p, rhs, false);
      if (trial.penalized) ++sol.penalized_evals;
      const double trial_norm = trial.residual.norm();
      if (trial_norm < rnorm) {
        u = u_trial;
        shot = trial;
        rnorm = trial_norm;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++iters;
    if (rnorm < best_norm) {
      best_norm = rnorm;
      best_u = u;
    }
    if (!accepted) {
      sol.warnings.push_back("line search stalled after " +
                             std::to_string(p.solver.max_backtracks) + " halvings");
      break;
    }
  }

  sol.newton_iters = iters;
  sol.status = best_norm <= p.solver.residual_tol ? Solution::Status::Converged
                                                  : Solution::Status::NoConvergence;
  sol.residual_norm = best_norm;
  sol.unknowns = Unknowns::unpack(best_u, p);

  ShotResult final_shot = shoot(sol.unknowns, p, rhs, true);
  if (final_shot.penalized) {
    throw InsideObstacleError("best iterate penetrates an obstacle: " +
                                  final_shot.fail_what,
                              -1, 0.0, final_shot.fail_time);
  }
  sol.trajectory = std::move(final_shot.trajectory);
  sol.knot_jerk_jumps = std::move(final_shot.knot_jerk_jumps);
  sol.clearance_min = sol.trajectory.clearance_min;

  if (p.constrained()) {
    double max_abn = 0.0;
    for (const ExtremalState& s : sol.trajectory.states) {
      const StateDerivs d = rhs(s);
      max_abn = std::max(max_abn,
                         abnormal_residual(s, *p.constraints, d.lambda_dot, p.metric));
    }
    sol.max_abnormal_residual = max_abn;
  }
  return sol;
}

}  // namespace geospline
