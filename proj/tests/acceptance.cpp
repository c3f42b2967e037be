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

// Release gate. Each criterion prints exactly one PASS/FAIL line with the
// measured numbers and its runtime; the exit code is the number of failures.
// Run a single criterion with `acceptance <1..8>` or everything with
// `acceptance all`.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geospline/config.hpp"
#include "geospline/dynamics.hpp"
#include "geospline/geometry.hpp"
#include "geospline/integrate.hpp"
#include "geospline/lie_groups.hpp"
#include "geospline/potentials.hpp"
#include "geospline/shooting.hpp"
#include "geospline/variational.hpp"
#include "test_support.hpp"

using namespace geospline;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string shipped(const std::string& name) {
  return std::string(GEOSPLINE_CONFIG_DIR) + "/" + name;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string strf(const char* fmt, ...) {
  char buf[768];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

Vec chain_part(const ExtremalState& s, int which) {
  return which == 0 ? s.v : which == 1 ? s.v1 : s.v2;
}

/// Five-point central first derivative of one chain member of a uniformly
/// sampled state series.
Vec fd5(const std::vector<ExtremalState>& st, int i, double h, int which) {
  return (-chain_part(st[i + 2], which) + 8.0 * chain_part(st[i + 1], which) -
          8.0 * chain_part(st[i - 1], which) + chain_part(st[i - 2], which)) /
         (12.0 * h);
}

/// Worst mismatch between finite-difference derivatives of the sampled
/// velocity chain and the closed-form extremal equation, skipping stencil
/// windows that straddle an interior knot (the jerk jumps there).
double chain_residual_max(const Trajectory& tr, const std::vector<double>& interior_knots,
                          const std::function<Vec(const ExtremalState&)>& closed_form) {
  const double h = tr.times[1] - tr.times[0];
  double worst = 0.0;
  for (int i = 2; i + 2 < static_cast<int>(tr.size()); ++i) {
    bool skip = false;
    for (double tk : interior_knots) {
      if (std::abs(tr.times[i] - tk) < 3.0 * h) skip = true;
    }
    for (int k = -2; k < 2 && !skip; ++k) {
      if (std::abs(tr.times[i + k + 1] - tr.times[i + k] - h) > 1e-9) skip = true;
    }
    if (skip) continue;
    const ExtremalState& s = tr.states[i];
    const double r1 = (fd5(tr.states, i, h, 0) - s.v1).norm();
    const double r2 = (fd5(tr.states, i, h, 1) - s.v2).norm();
    const double r3 = (fd5(tr.states, i, h, 2) - closed_form(s)).norm();
    worst = std::max({worst, r1, r2, r3});
  }
  return worst;
}

double fitted_slope(const std::vector<double>& hs, const std::vector<double>& errs) {
  const int m = static_cast<int>(hs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

int nearest_sample(const std::vector<double>& times, double t) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(times.size()); ++i) {
    if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------
// 1. Rigid-body reference problem on SE(3): two spheres, four knots.

Outcome criterion1() {
  Outcome out;
  const ProblemSpec p = load_problem(shipped("se3_paper.json"));

  const auto t0 = std::chrono::steady_clock::now();
  const Solution sol = solve(p);
  const double secs = seconds_since(t0);

  double worst_knot = 0.0;
  for (const Knot& k : p.knots) {
    const int i = nearest_sample(sol.trajectory.times, k.t);
    if (std::abs(sol.trajectory.times[i] - k.t) > 1e-9) {
      out.detail = strf("no trajectory sample at knot time %.4f", k.t);
      return out;
    }
    const Vec err = log(compose(inverse(sol.trajectory.states[i].x), k.pose));
    worst_knot = std::max(worst_knot, err.norm());
  }

  double min_r = std::numeric_limits<double>::infinity();
  double min_c2 = std::numeric_limits<double>::infinity();
  const Eigen::Vector3d c2(2.0, 2.0, 2.0);
  for (const ExtremalState& s : sol.trajectory.states) {
    min_r = std::min(min_r, s.x.r.norm());
    min_c2 = std::min(min_c2, (Eigen::Vector3d(s.x.r) - c2).squaredNorm());
  }

  out.pass = sol.converged() && sol.residual_norm <= 1e-8 && worst_knot <= 1e-6 &&
             min_r > 1.0 && min_c2 > 2.0 && secs <= 60.0;
  out.detail = strf(
      "residual %.2e (<=1e-8), max knot log error %.2e (<=1e-6), min |r| %.4f (>1), "
      "min |r-(2,2,2)|^2 %.4f (>2), %d iterations, solve %.1fs (<=60)",
      sol.residual_norm, worst_knot, min_r, min_c2, sol.newton_iters, secs);
  return out;
}

// ---------------------------------------------------------------------------
// 2. Unicycle reference problem on SE(2): printed data, knife-edge constraint.

Outcome criterion2() {
  Outcome out;
  const ProblemSpec p = load_problem(shipped("unicycle_paper.json"));
  const auto t0 = std::chrono::steady_clock::now();

  Solution sol;
  try {
    sol = solve(p);
  } catch (const ValidationError& e) {
    out.pass = false;
    out.detail = strf(
        "unsolvable as printed: %s; the t=1.33 waypoint (1.5,1.5) sits inside the second "
        "disc (|r-(2,2)|^2 = 0.5, boundary level 2.0), so no interpolant can clear it "
        "strictly; configs/unicycle_feasible.json is a nearby solvable variant",
        e.what());
    return out;
  }
  const double secs = seconds_since(t0);

  double max_b2 = 0.0;
  double min_r = std::numeric_limits<double>::infinity();
  double min_c2 = std::numeric_limits<double>::infinity();
  const Eigen::Vector2d c2(2.0, 2.0);
  for (const ExtremalState& s : sol.trajectory.states) {
    max_b2 = std::max(max_b2, std::abs(s.v[2]));
    min_r = std::min(min_r, s.x.r.norm());
    min_c2 = std::min(min_c2, (Eigen::Vector2d(s.x.r) - c2).squaredNorm());
  }
  out.pass = sol.converged() && max_b2 <= 1e-8 && min_r > 1.0 && min_c2 > 2.0 &&
             secs <= 60.0;
  out.detail = strf(
      "residual %.2e, max |b2| %.2e (<=1e-8), min |r| %.4f (>1), min |r-(2,2)|^2 %.4f "
      "(>2), solve %.1fs (<=60)",
      sol.residual_norm, max_b2, min_r, min_c2, secs);
  return out;
}

// ---------------------------------------------------------------------------
// 3. Manufactured-solution recovery on all three groups.

struct ManufacturedCase {
  ProblemSpec p;
  Vec truth;
};

ManufacturedCase manufacture_case(Group g, const MetricTensor& metric,
                                  const std::vector<Obstacle>& obstacles, double sigma,
                                  double rate_cap, double speed_cap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = algebra_dim(g);
  auto draw = [&](double cap) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = cap * u(rng);
    return x;
  };

  ManufacturedCase mc;
  ProblemSpec& p = mc.p;
  p.group = g;
  p.metric = metric;
  p.sigma = sigma;
  p.obstacles = obstacles;
  p.solver.h = 1e-3;
  p.solver.scheme = Scheme::SemiImplicitEuler;
  p.solver.residual_tol = 1e-8;
  p.solver.max_newton_iters = 100;

  Unknowns truth;
  truth.v1_0 = draw(rate_cap);
  truth.v2_0 = draw(rate_cap);
  const Vec v2_restart = draw(rate_cap);
  truth.jerk_restarts = {v2_restart};

  ExtremalState s0 = ExtremalState::zero(g);
  s0.v = draw(speed_cap);
  s0.v1 = truth.v1_0;
  s0.v2 = truth.v2_0;

  const Connection conn = Connection::general(metric);
  const RhsFn rhs = [conn, obstacles, sigma](const ExtremalState& s) {
    return StateDerivs{rhs_general(s, conn, obstacles, sigma), Vec()};
  };

  const Trajectory first =
      integrate_segment(s0, 0.0, 0.5, 1e-3, rhs, Scheme::SemiImplicitEuler, obstacles);
  ExtremalState mid = first.states.back();
  mid.v2 = v2_restart;
  const Trajectory second =
      integrate_segment(mid, 0.5, 1.0, 1e-3, rhs, Scheme::SemiImplicitEuler, obstacles);

  Knot k0, k1, k2;
  k0.t = 0.0;
  k0.pose = GroupElement::identity(g);
  k1.t = 0.5;
  k1.pose = first.states.back().x;
  k2.t = 1.0;
  k2.pose = second.states.back().x;
  p.knots = {k0, k1, k2};
  p.v0 = s0.v;
  p.vN = second.states.back().v;

  mc.truth = truth.pack();
  return mc;
}

Outcome criterion3() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  struct Setup {
    Group g;
    MetricTensor metric;
    Obstacle obstacle;
    double rate_cap;
    double speed_cap;
  };
  Vec q_axis(3);
  q_axis << 1.8, 0.0, 0.0;
  const std::vector<Setup> setups = {
      {Group::SO3, MetricTensor::identity(Group::SO3),
       Obstacle::orientation(exp(Group::SO3, q_axis), 0.5), 0.2, 0.4},
      {Group::SE2, MetricTensor::se2(1.5, 1.0),
       Obstacle::sphere(Eigen::Vector2d(3.0, 0.0), 0.5, 1.0), 0.3, 0.7},
      {Group::SE3, MetricTensor::identity(Group::SE3),
       Obstacle::sphere(Eigen::Vector3d(0.0, 0.0, 3.5), 1.0, 1.0), 0.3, 0.7},
  };

  int solved = 0;
  double worst = 0.0;
  for (size_t gi = 0; gi < setups.size(); ++gi) {
    const Setup& su = setups[gi];
    for (int seed = 0; seed < 10; ++seed) {
      // First half of the seeds run barrier-free, the rest carry one obstacle.
      const std::vector<Obstacle> obs =
          seed >= 5 ? std::vector<Obstacle>{su.obstacle} : std::vector<Obstacle>{};
      const ManufacturedCase mc = manufacture_case(
          su.g, su.metric, obs, 0.5, su.rate_cap, su.speed_cap, 9000 + 100 * gi + seed);
      const Solution sol = solve(mc.p);
      if (sol.converged()) ++solved;
      const double err = (sol.unknowns.pack() - mc.truth).lpNorm<Eigen::Infinity>();
      worst = std::max(worst, err);
    }
  }

  const double secs = seconds_since(t0);
  out.pass = solved == 30 && worst <= 1e-5 && secs <= 300.0;
  out.detail = strf(
      "%d/30 forward-generated problems re-solved, max unknown recovery error %.2e "
      "(<=1e-5 at h=1e-3), %.1fs (<=300)",
      solved, worst, secs);
  return out;
}

// ---------------------------------------------------------------------------
// 4. Zero-potential regression: solved trajectories satisfy the closed-form
// cubic-in-tension equations under finite-difference substitution.

Outcome criterion4() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  // The SE(3) reference problem with its barriers removed.
  ProblemSpec p = load_problem(shipped("se3_paper.json"));
  p.obstacles.clear();
  const Solution sol = solve(p);
  if (!sol.converged()) {
    out.detail = "obstacle-free SE(3) solve did not converge";
    return out;
  }
  // The last leg of this extremal is stiff (chain derivatives grow ~25x per
  // level), so the probe grid is finer than the sweep's: stencil truncation
  // at 5e-4 alone would eat the whole 1e-6 budget.
  const Trajectory fine = reintegrate(sol, p, 1e-4, Scheme::RK4);
  const double sigma_se3 = p.sigma;
  const double worst_se3 =
      chain_residual_max(fine, {0.74, 1.43}, [sigma_se3](const ExtremalState& s) {
        return rhs_se3_body(s, {}, sigma_se3);
      });

  // A curved rotation-only problem checked against v''' = v'' x v + sigma v'.
  ProblemSpec q;
  q.group = Group::SO3;
  q.metric = MetricTensor::identity(Group::SO3);
  q.sigma = 0.5;
  Vec target(3);
  target << 0.8, 0.4, -0.2;
  Knot k0, k1;
  k0.t = 0.0;
  k0.pose = GroupElement::identity(Group::SO3);
  k1.t = 1.0;
  k1.pose = exp(Group::SO3, target);
  q.knots = {k0, k1};
  q.v0 = Vec(3);
  q.v0 << 0.3, -0.1, 0.2;
  q.vN = Vec(3);
  q.vN << -0.2, 0.3, 0.1;
  q.solver.h = 0.01;
  const Solution sol2 = solve(q);
  if (!sol2.converged()) {
    out.detail = "rotation-only solve did not converge";
    return out;
  }
  const Trajectory fine2 = reintegrate(sol2, q, 1e-4, Scheme::RK4);
  const GroupElement q_id = GroupElement::identity(Group::SO3);
  const double sigma_so3 = q.sigma;
  const double worst_so3 =
      chain_residual_max(fine2, {}, [&q_id, sigma_so3](const ExtremalState& s) {
        return rhs_so3(s, q_id, 0.0, sigma_so3);
      });

  const double secs = seconds_since(t0);
  out.pass = worst_se3 <= 1e-6 && worst_so3 <= 1e-6 && secs <= 60.0;
  out.detail = strf(
      "max pointwise equation residual: SE(3) body form %.2e, SO(3) form %.2e "
      "(<=1e-6 each, 5-point stencils at h=1e-4), %.1fs (<=60)",
      worst_se3, worst_so3, secs);
  return out;
}

// ---------------------------------------------------------------------------
// 5. Geometry oracle suite: closed-form curvature against the commutator
// oracle, torsion-freeness, metric compatibility.

Outcome criterion5() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  struct Case {
    const char* name;
    Connection conn;
  };
  const std::vector<Case> cases = {
      {"so3/bi-invariant", Connection::bi_invariant(1.0)},
      {"so3/general", Connection::general(MetricTensor::so3(Eigen::Vector3d(1.0, 2.0, 3.5)))},
      {"se2/closed", Connection::se2_closed(2.0, 0.5)},
      {"se2/general", Connection::general(MetricTensor::se2(2.0, 0.5))},
      {"se3/unit", Connection::se3_unit()},
      {"se3/closed",
       Connection::se3_closed(Eigen::Vector3d(2.0, 2.0, 2.0), Eigen::Vector3d(0.5, 0.5, 0.5))},
      {"se3/general",
       Connection::general(
           MetricTensor::se3(Eigen::Vector3d(1.0, 2.0, 3.0), Eigen::Vector3d(4.0, 5.0, 6.0)))},
  };

  double worst_curv = 0.0, worst_torsion = 0.0, worst_compat = 0.0;
  for (size_t ci = 0; ci < cases.size(); ++ci) {
    const Connection& conn = cases[ci].conn;
    const Group g = conn.group;
    const int n = algebra_dim(g);

    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const Vec ei = basis_vector(g, i), ej = basis_vector(g, j), ek = basis_vector(g, k);
          const Vec diff = curvature(conn, ei, ej, ek) - curvature_oracle(conn, ei, ej, ek);
          worst_curv = std::max(worst_curv, diff.lpNorm<Eigen::Infinity>());
        }
      }
    }

    std::mt19937_64 rng(5000 + ci);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&] {
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = u(rng);
      return x;
    };
    for (int trial = 0; trial < 500; ++trial) {
      const Vec a = draw(), b = draw(), z = draw();
      const Vec torsion = nabla(conn, a, b) - nabla(conn, b, a) - bracket(g, a, b);
      worst_torsion = std::max(worst_torsion, torsion.norm());
      const double compat =
          inner(nabla(conn, a, b), z, conn.metric) + inner(b, nabla(conn, a, z), conn.metric);
      worst_compat = std::max(worst_compat, std::abs(compat));
    }
  }

  const double secs = seconds_since(t0);
  out.pass = worst_curv <= 1e-10 && worst_torsion <= 1e-10 && worst_compat <= 1e-10 &&
             secs <= 10.0;
  out.detail = strf(
      "curvature vs oracle %.2e on all basis triples, torsion %.2e, metric "
      "compatibility %.2e on 500 random cases per connection (<=1e-10 each), %.2fs (<=10)",
      worst_curv, worst_torsion, worst_compat, secs);
  return out;
}

// ---------------------------------------------------------------------------
// 6. Finite-difference gradient verification for every obstacle kind.

GroupElement admissible_pose(Group g, const Obstacle& obs, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 5000; ++attempt) {
    const Vec xi = testutil::random_algebra(g, rng, 2.5, 3.0);
    const GroupElement pose = exp(g, xi);
    try {
      if (obstacle_clearance(obs, pose) >= 0.3) return pose;
    } catch (const SingularLogError&) {
      // Point obstacle at the far side of the rotation group: draw again.
    }
  }
  throw std::runtime_error("no admissible pose found for gradient check");
}

Outcome criterion6() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  Vec q1(3), q2(3);
  q1 << 0.3, -0.2, 0.5;
  q2 << -0.4, 0.1, 0.3;
  struct Kind {
    const char* name;
    Group g;
    Obstacle obs;
  };
  const std::vector<Kind> kinds = {
      {"sphere/SE3", Group::SE3, Obstacle::sphere(Eigen::Vector3d(0.5, -0.3, 0.2), 0.7, 1.3)},
      {"sphere/SE2", Group::SE2, Obstacle::sphere(Eigen::Vector2d(1.0, 1.0), 0.5, 0.8)},
      {"orientation/SO3", Group::SO3, Obstacle::orientation(exp(Group::SO3, q1), 2.0)},
      {"compact_point/SO3", Group::SO3, Obstacle::compact_point(exp(Group::SO3, q2), 1.1)},
  };

  const double eps = 1e-6;
  double worst = 0.0;
  for (size_t ki = 0; ki < kinds.size(); ++ki) {
    const Kind& kind = kinds[ki];
    const int n = algebra_dim(kind.g);
    std::mt19937_64 rng(6000 + ki);
    for (int trial = 0; trial < 200; ++trial) {
      const GroupElement pose = admissible_pose(kind.g, kind.obs, rng);
      Vec fd(n);
      for (int k = 0; k < n; ++k) {
        const Vec e = basis_vector(kind.g, k);
        const double vp = potential_value(kind.obs, compose(pose, exp(kind.g, eps * e)));
        const double vm = potential_value(kind.obs, compose(pose, exp(kind.g, -eps * e)));
        fd[k] = (vp - vm) / (2.0 * eps);
      }
      const Vec grad = potential_grad_body(kind.obs, pose);
      const double rel = (fd - grad).norm() / std::max(1.0, grad.norm());
      worst = std::max(worst, rel);
    }
  }

  const double secs = seconds_since(t0);
  out.pass = worst <= 1e-5 && secs <= 30.0;
  out.detail = strf(
      "max relative gradient error %.2e over 200 admissible poses per obstacle kind "
      "(<=1e-5), %.2fs (<=30)",
      worst, secs);
  return out;
}

// ---------------------------------------------------------------------------
// 7. Stationarity: reference solutions pass the first-variation sweep, a
// deliberately non-extremal curve fails it.

Outcome criterion7() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  // SE(3) reference solution.
  const ProblemSpec p1 = load_problem(shipped("se3_paper.json"));
  const Solution sol1 = solve(p1);
  const double d1 = stationarity_test(sol1, p1, 50, 1e-4);
  const bool se3_ok = sol1.converged() && d1 <= 5e-3;

  // Negative control: a constant-speed straight run squeezing past a sphere
  // interpolates its two knots but is nowhere near extremal for the action.
  ProblemSpec nc;
  nc.group = Group::SE3;
  nc.metric = MetricTensor::identity(Group::SE3);
  nc.sigma = 0.5;
  nc.obstacles = {Obstacle::sphere(Eigen::Vector3d(1.0, 0.4, 0.0), 0.09, 1.7)};
  Knot a0, a1;
  a0.t = 0.0;
  a0.pose = GroupElement::from_parts(Group::SE3, Mat::Identity(3, 3), Vec::Zero(3));
  a1.t = 2.0;
  Vec end(3);
  end << 2.0, 0.0, 0.0;
  a1.pose = GroupElement::from_parts(Group::SE3, Mat::Identity(3, 3), end);
  nc.knots = {a0, a1};
  nc.v0 = Vec::Zero(6);
  nc.v0[3] = 1.0;
  nc.vN = nc.v0;

  std::vector<double> times;
  std::vector<GroupElement> poses;
  for (int i = 0; i <= 2000; ++i) {
    const double t = static_cast<double>(i) / 1000.0;
    times.push_back(t);
    Vec r(3);
    r << t, 0.0, 0.0;
    poses.push_back(GroupElement::from_parts(Group::SE3, Mat::Identity(3, 3), r));
  }
  StationarityOptions opts;
  opts.n_dirs = 50;
  opts.eps = 1e-4;
  const double d_nc = stationarity_of_path(times, poses, nc, opts);
  const bool control_ok = d_nc > 5e-3;

  // SE(2) reference solution, unavailable as printed.
  bool se2_ok = false;
  std::string se2_note;
  try {
    const ProblemSpec p2 = load_problem(shipped("unicycle_paper.json"));
    const Solution sol2 = solve(p2);
    const double d2 = stationarity_test(sol2, p2, 50, 1e-4);
    se2_ok = sol2.converged() && d2 <= 5e-3;
    se2_note = strf("unicycle max derivative %.2e", d2);
  } catch (const ValidationError&) {
    se2_note =
        "unicycle part unavailable: reference data rejected (waypoint inside the second "
        "disc), nothing to test";
  }

  const double secs = seconds_since(t0);
  out.pass = se3_ok && control_ok && se2_ok && secs <= 300.0;
  out.detail = strf(
      "SE(3) solution max directional derivative %.2e (<=5e-3), negative control %.2e "
      "(must exceed 5e-3), %s, %.1fs (<=300)",
      d1, d_nc, se2_note.c_str(), secs);
  return out;
}

// ---------------------------------------------------------------------------
// 8. Integrator order on the rotation-only zero-potential chain.

Outcome criterion8() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();

  const double sigma = 0.8;
  ExtremalState s0 = ExtremalState::zero(Group::SO3);
  s0.v << 0.9, 0.7, -0.6;
  s0.v1 << 0.5, -0.6, 0.45;
  s0.v2 << 0.4, 0.5, -0.5;
  const GroupElement q_id = GroupElement::identity(Group::SO3);
  const RhsFn rhs = [q_id, sigma](const ExtremalState& s) {
    return StateDerivs{rhs_so3(s, q_id, 0.0, sigma), Vec()};
  };

  auto endpoint = [&](double h, Scheme scheme) {
    return integrate_segment(s0, 0.0, 1.0, h, rhs, scheme).states.back();
  };
  const ExtremalState ref = endpoint(7.8125e-5, Scheme::RK4);
  auto chain_err = [&](const ExtremalState& s) {
    return std::sqrt((s.v - ref.v).squaredNorm() + (s.v1 - ref.v1).squaredNorm() +
                     (s.v2 - ref.v2).squaredNorm());
  };

  const std::vector<double> hs = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
  std::vector<double> err_euler, err_rk4;
  for (double h : hs) {
    err_euler.push_back(chain_err(endpoint(h, Scheme::SemiImplicitEuler)));
    err_rk4.push_back(chain_err(endpoint(h, Scheme::RK4)));
  }
  const double slope_euler = fitted_slope(hs, err_euler);
  const double slope_rk4 = fitted_slope(hs, err_rk4);

  const double secs = seconds_since(t0);
  out.pass = std::abs(slope_euler - 1.0) <= 0.3 && std::abs(slope_rk4 - 4.0) <= 0.3 &&
             secs <= 60.0;
  out.detail = strf(
      "endpoint-error slopes: semi-implicit Euler %.3f (1.0+-0.3), RK4 %.3f (4.0+-0.3) "
      "across h in {1e-2..1.25e-3}, %.2fs (<=60)",
      slope_euler, slope_rk4, secs);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using CriterionFn = Outcome (*)();
  const CriterionFn criteria[8] = {criterion1, criterion2, criterion3, criterion4,
                                   criterion5, criterion6, criterion7, criterion8};

  std::vector<int> selected;
  const std::string which = argc > 1 ? argv[1] : "all";
  if (which == "all") {
    for (int c = 1; c <= 8; ++c) selected.push_back(c);
  } else {
    const int c = std::atoi(which.c_str());
    if (c < 1 || c > 8) {
      std::fprintf(stderr, "usage: acceptance [1..8|all]\n");
      return 64;
    }
    selected.push_back(c);
  }

  int failures = 0;
  for (int c : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[c - 1]();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = strf("unhandled exception: %s", e.what());
    }
    std::printf("%s criterion %d: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", c,
                out.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (selected.size() > 1) {
    std::printf("%d/%d criteria passed\n", static_cast<int>(selected.size()) - failures,
                static_cast<int>(selected.size()));
  }
  return failures;
}
