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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "geospline/lie_groups.hpp"
#include "geospline/variational.hpp"
#include "test_support.hpp"

using namespace geospline;
using namespace geospline::testutil;

namespace {

/// Sampled one-parameter subgroup path t -> exp(t v).
void subgroup_path(Group g, const Vec& v, double T, double h,
                   std::vector<double>& times, std::vector<GroupElement>& poses) {
  times.clear();
  poses.clear();
  const int steps = static_cast<int>(std::round(T / h));
  for (int k = 0; k <= steps; ++k) {
    const double t = (k == steps) ? T : k * h;
    times.push_back(t);
    poses.push_back(exp(g, Vec(t * v)));
  }
}

/// The shipped knife-edge reference problem on SE(2): a gentle left arc
/// around the unit disc at the origin, with a small second disc outside the
/// turn. Mirrors configs/unicycle_feasible.json.
ProblemSpec feasible_unicycle_problem() {
  ProblemSpec p;
  p.group = Group::SE2;
  p.metric = MetricTensor::se2(2.0, 1.0);
  p.sigma = 0.5;
  p.obstacles = {Obstacle::sphere(Eigen::Vector2d(0.0, 0.0), 1.0, 1.7),
                 Obstacle::sphere(Eigen::Vector2d(2.9, 2.35), 0.15, 0.9)};
  p.constraints = ConstraintSpec::unicycle_knife_edge(2.0, 1.0);

  auto se2 = [](double theta_deg, double x, double y) {
    const double theta = theta_deg * M_PI / 180.0;
    Mat R(2, 2);
    R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    Vec r(2);
    r << x, y;
    return GroupElement::from_parts(Group::SE2, R, r);
  };
  p.knots.push_back({0.0, se2(60.0, 2.0, -1.0)});
  p.knots.push_back({0.9, se2(85.0, 2.35, 0.55)});
  p.knots.push_back({1.9, se2(120.0, 1.7, 1.95)});
  p.knots.push_back({2.9, se2(145.0, 0.4, 2.85)});
  p.v0 = Vec(3);
  p.v0 << 0.45, 1.65, 0.0;
  p.vN = Vec(3);
  p.vN << 0.4, 1.5, 0.0;
  p.solver.h = 0.01;
  p.solver.max_newton_iters = 400;
  p.solver.scheme = Scheme::RK4;
  return p;
}

/// One sampling of a solved knife-edge run: poses and multiplier history on
/// the re-integration grid at step h.
struct SampledRun {
  std::vector<double> times;
  std::vector<GroupElement> poses;
  std::vector<double> lambda;
};

SampledRun sample_run(const Solution& sol, const ProblemSpec& validated, double h) {
  const Trajectory fine = reintegrate(sol, validated, h, Scheme::RK4);
  SampledRun run;
  run.times = fine.times;
  run.poses.reserve(fine.size());
  run.lambda.reserve(fine.size());
  for (size_t k = 0; k < fine.size(); ++k) {
    run.poses.push_back(fine.states[k].x);
    run.lambda.push_back(fine.states[k].lambda[0]);
  }
  return run;
}

/// Directional derivative sweep of the extended action along seeded bump
/// fields, built from the public action pieces so the multiplier series can
/// be tampered with (scaled by lambda_scale). Pairs the h and h/2 samplings
/// the way the library sweep does, extrapolating the stencil bias away.
double extended_sweep(const SampledRun& at_h, const SampledRun& at_half,
                      double lambda_scale, const ProblemSpec& p, int n_dirs,
                      double eps) {
  const Connection conn = Connection::general(p.metric);
  std::vector<double> knot_times;
  for (size_t i = 1; i + 1 < p.knots.size(); ++i) knot_times.push_back(p.knots[i].t);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto signed_difference = [&](const SampledRun& run, const PerturbationField& field) {
    std::vector<GroupElement> plus(run.poses.size()), minus(run.poses.size());
    for (size_t k = 0; k < run.poses.size(); ++k) {
      const Vec X = field.at(run.times[k], p.knots);
      plus[k] = compose(run.poses[k], exp(p.group, Vec(eps * X)));
      minus[k] = compose(run.poses[k], exp(p.group, Vec(-eps * X)));
    }
    std::vector<double> lam(run.lambda.size());
    for (size_t k = 0; k < run.lambda.size(); ++k) lam[k] = lambda_scale * run.lambda[k];
    const double jp =
        functional_J(run.times, plus, p.sigma, p.obstacles, conn, knot_times) +
        constraint_term(run.times, plus, lam, 2, conn, knot_times);
    const double jm =
        functional_J(run.times, minus, p.sigma, p.obstacles, conn, knot_times) +
        constraint_term(run.times, minus, lam, 2, conn, knot_times);
    return (jp - jm) / (2.0 * eps);
  };

  double worst = 0.0;
  for (int d = 0; d < n_dirs; ++d) {
    PerturbationField field;
    field.seg_directions.resize(static_cast<size_t>(p.segments()));
    for (Vec& xi : field.seg_directions) {
      xi = Vec::NullaryExpr(3, [&](Eigen::Index) { return gauss(rng); });
      xi.normalize();
    }
    const double coarse = signed_difference(at_h, field);
    const double fine = signed_difference(at_half, field);
    worst = std::max(worst, std::abs((4.0 * fine - coarse) / 3.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("action of a geodesic is zero without tension") {
  std::vector<double> times;
  std::vector<GroupElement> poses;
  Vec v = Vec::Zero(6);
  v.tail(3) << 0.8, -0.4, 0.3;
  subgroup_path(Group::SE3, v, 1.0, 1e-3, times, poses);
  const Connection conn = Connection::general(MetricTensor::identity(Group::SE3));
  CHECK(std::abs(functional_J(times, poses, 0.0, {}, conn)) <= 1e-8);
}

TEST_CASE("action of a constant-speed subgroup is the tension energy") {
  struct Case {
    Group g;
    MetricTensor metric;
    Vec v;
  };
  std::vector<Case> cases;
  {
    Vec v = Vec::Zero(6);
    v.head(3) << 0.9, 0.0, 0.0;
    cases.push_back({Group::SE3, MetricTensor::identity(Group::SE3), v});
  }
  cases.push_back({Group::SO3, MetricTensor::so3(Eigen::Vector3d(2.0, 3.0, 4.0)),
                   Vec(basis_vector(Group::SO3, 1))});

  const double sigma = 0.7, T = 1.5;
  for (const Case& c : cases) {
    std::vector<double> times;
    std::vector<GroupElement> poses;
    subgroup_path(c.g, c.v, T, 1e-3, times, poses);
    const Connection conn = Connection::general(c.metric);
    const double expect = 0.5 * sigma * inner(c.v, c.v, c.metric) * T;
    CHECK(functional_J(times, poses, sigma, {}, conn) ==
          doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("action quadrature converges at second order") {
  // Planar spin history theta(t) = sin t on SO(3):
  // J = 1/2 int (theta''^2 + sigma theta'^2).
  const double sigma = 0.5, T = 1.0;
  const double exact =
      0.5 * ((0.5 - std::sin(2.0) / 4.0) + sigma * (0.5 + std::sin(2.0) / 4.0));
  const Connection conn = Connection::bi_invariant();

  auto J_at = [&](double h) {
    std::vector<double> times;
    std::vector<GroupElement> poses;
    const int steps = static_cast<int>(std::round(T / h));
    for (int k = 0; k <= steps; ++k) {
      const double t = (k == steps) ? T : k * h;
      times.push_back(t);
      poses.push_back(exp(Group::SO3, Vec(std::sin(t) * basis_vector(Group::SO3, 0))));
    }
    return functional_J(times, poses, sigma, {}, conn);
  };

  const double e1 = std::abs(J_at(2e-3) - exact);
  const double e2 = std::abs(J_at(1e-3) - exact);
  CHECK(e1 <= 1e-4);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("action inputs are validated") {
  const Connection conn = Connection::bi_invariant();
  std::vector<double> times = {0.0, 0.5, 1.0};
  std::vector<GroupElement> poses(2, GroupElement::identity(Group::SO3));
  CHECK_THROWS_AS(functional_J(times, poses, 0.0, {}, conn), std::invalid_argument);
  poses.assign(2, GroupElement::identity(Group::SO3));
  times = {0.0, 1.0};
  CHECK_THROWS_AS(functional_J(times, poses, 0.0, {}, conn), std::invalid_argument);
}

TEST_CASE("trajectory overload matches the raw sample overload") {
  ExtremalState s0 = ExtremalState::zero(Group::SO3);
  s0.v = basis_vector(Group::SO3, 0);
  s0.v1 = 0.2 * basis_vector(Group::SO3, 1);
  const Connection conn = Connection::bi_invariant();
  const RhsFn rhs = [&](const ExtremalState& s) {
    StateDerivs d;
    d.v3 = rhs_general(s, conn, {}, 0.5);
    return d;
  };
  const Trajectory traj = integrate_segment(s0, 0.0, 1.0, 1e-3, rhs, Scheme::RK4);
  std::vector<GroupElement> poses;
  for (const ExtremalState& s : traj.states) poses.push_back(s.x);
  CHECK(functional_J(traj, 0.5, {}, conn) ==
        doctest::Approx(functional_J(traj.times, poses, 0.5, {}, conn)).epsilon(1e-15));
}

TEST_CASE("multiplier term integrates lambda against the constrained rate") {
  // Pure y-translation: v = e3 throughout, lambda(t) = t, so the term is
  // int_0^T t dt = T^2 / 2 and the trapezoid rule is exact.
  const double T = 2.0;
  std::vector<double> times;
  std::vector<GroupElement> poses;
  subgroup_path(Group::SE2, basis_vector(Group::SE2, 2), T, 0.01, times, poses);
  std::vector<double> lambda(times.size());
  for (size_t k = 0; k < times.size(); ++k) lambda[k] = times[k];
  const Connection conn = Connection::se2_closed(2.0, 1.0);
  CHECK(constraint_term(times, poses, lambda, 2, conn) ==
        doctest::Approx(T * T / 2.0).epsilon(1e-10));
  // The first translational coordinate never moves on this path.
  CHECK(constraint_term(times, poses, lambda, 1, conn) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  lambda.pop_back();
  CHECK_THROWS_AS(constraint_term(times, poses, lambda, 2, conn), std::invalid_argument);
}

TEST_CASE("perturbation bumps vanish at knots and peak mid-segment") {
  std::vector<Knot> knots;
  knots.push_back({0.0, GroupElement::identity(Group::SO3)});
  knots.push_back({1.0, GroupElement::identity(Group::SO3)});
  knots.push_back({2.5, GroupElement::identity(Group::SO3)});
  PerturbationField field;
  field.seg_directions = {basis_vector(Group::SO3, 0), basis_vector(Group::SO3, 1)};
  CHECK(field.at(0.0, knots).norm() == 0.0);
  CHECK(field.at(1.0, knots).norm() == 0.0);
  CHECK(field.at(2.5, knots).norm() == 0.0);
  CHECK(approx(field.at(0.5, knots), basis_vector(Group::SO3, 0), 1e-15));
  CHECK(approx(field.at(1.75, knots), basis_vector(Group::SO3, 1), 1e-15));
  // Quartic profile: quarter-way in, u/(L^2/4) = 3/4.
  CHECK(field.at(0.25, knots).norm() == doctest::Approx(0.5625).epsilon(1e-12));
}

TEST_CASE("solved subgroup problems pass the stationarity sweep") {
  Vec v = Vec::Zero(6);
  v.head(3) << 0.8, 0.0, 0.0;
  ProblemSpec p;
  p.group = Group::SE3;
  p.metric = MetricTensor::identity(Group::SE3);
  p.sigma = 0.5;
  p.knots.push_back({0.0, GroupElement::identity(Group::SE3)});
  p.knots.push_back({1.5, exp(Group::SE3, Vec(1.5 * v))});
  p.v0 = v;
  p.vN = v;
  const Solution sol = solve(p);
  REQUIRE(sol.converged());
  CHECK(stationarity_test(sol, p, 10, 1e-4) <= 5e-3);
}

TEST_CASE("straight run past an off-axis obstacle is not stationary") {
  Vec v = Vec::Zero(6);
  v.tail(3) << 1.0, 0.0, 0.0;
  ProblemSpec p;
  p.group = Group::SE3;
  p.metric = MetricTensor::identity(Group::SE3);
  p.sigma = 0.0;
  p.obstacles = {Obstacle::sphere(Eigen::Vector3d(1.0, 0.4, 0.0), 0.09, 1.7)};
  p.knots.push_back({0.0, GroupElement::identity(Group::SE3)});
  p.knots.push_back({2.0, exp(Group::SE3, Vec(2.0 * v))});
  p.v0 = v;
  p.vN = v;

  std::vector<double> times;
  std::vector<GroupElement> poses;
  subgroup_path(Group::SE3, v, 2.0, 2e-3, times, poses);
  StationarityOptions opts;
  opts.n_dirs = 20;
  const double deriv = stationarity_of_path(times, poses, p, opts);
  CHECK(deriv >= 1e-2);
}

TEST_CASE("knife-edge solution is stationary for the extended action only") {
  ProblemSpec p = feasible_unicycle_problem();
  const Solution sol = solve(p);
  REQUIRE(sol.converged());

  ProblemSpec validated = p;
  validated.validate_and_project();
  const SampledRun at_h = sample_run(sol, validated, 1e-3);
  const SampledRun at_half = sample_run(sol, validated, 5e-4);

  const double good = extended_sweep(at_h, at_half, 1.0, validated, 20, 1e-4);
  CHECK(good <= 5e-3);

  // Library sweep agrees through the Solution entry point.
  CHECK(stationarity_test(sol, p, 20, 1e-4) <= 5e-3);

  // Negating the multiplier history must break stationarity: the path is a
  // critical point of J + int lambda b2 and of nothing else.
  const double bad = extended_sweep(at_h, at_half, -1.0, validated, 20, 1e-4);
  CHECK(bad >= 1e-2);
  CHECK(bad > 100.0 * good);
}
