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

#include "geospline/variational.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "geospline/lie_groups.hpp"

namespace geospline {

namespace {

// Pose-derived body velocities: central differences through the group
// logarithm, second-order one-sided at the path ends. A single log ratio at
// an end estimates the velocity half a step inward, which leaves an O(1)
// error in the end accelerations and an O(h) tail in the integral; the
// two-log fit below removes it.
std::vector<Vec> path_velocities(const std::vector<double>& times,
                                 const std::vector<GroupElement>& poses) {
  const size_t K = poses.size();
  if (K < 3) throw std::invalid_argument("path needs at least three samples");
  std::vector<Vec> v(K);
  {
    const double s1 = times[1] - times[0];
    const double s2 = times[2] - times[0];
    const Vec l1 = log(compose(inverse(poses[0]), poses[1]));
    const Vec l2 = log(compose(inverse(poses[0]), poses[2]));
    v[0] = (s2 * s2 * l1 - s1 * s1 * l2) / (s1 * s2 * (s2 - s1));
  }
  for (size_t k = 1; k + 1 < K; ++k) {
    v[k] = log(compose(inverse(poses[k - 1]), poses[k + 1])) /
           (times[k + 1] - times[k - 1]);
  }
  {
    const double s1 = times[K - 1] - times[K - 2];
    const double s2 = times[K - 1] - times[K - 3];
    const Vec b1 = log(compose(inverse(poses[K - 1]), poses[K - 2]));
    const Vec b2 = log(compose(inverse(poses[K - 1]), poses[K - 3]));
    v[K - 1] = (s1 * s1 * b2 - s2 * s2 * b1) / (s1 * s2 * (s2 - s1));
  }
  return v;
}

double trapezoid(const std::vector<double>& times, const std::vector<double>& w) {
  double acc = 0.0;
  for (size_t k = 0; k + 1 < times.size(); ++k) {
    acc += 0.5 * (times[k + 1] - times[k]) * (w[k] + w[k + 1]);
  }
  return acc;
}

// Composite Simpson on uniformly spaced samples, with a 3/8 block soaking
// up an odd panel count; trapezoid handles irregular spacing. Stationarity
// sweeps integrate products with a quartic bump whose fourth derivative is
// huge (384/L^4); trapezoid turns that into the dominant error term while
// Simpson integrates those pieces exactly.
double quad(const std::vector<double>& times, const std::vector<double>& w) {
  const size_t K = times.size();
  if (K < 2) return 0.0;
  const double h0 = times[1] - times[0];
  for (size_t k = 0; k + 1 < K; ++k) {
    if (std::abs((times[k + 1] - times[k]) - h0) > 1e-9 * std::max(1.0, std::abs(h0))) {
      return trapezoid(times, w);
    }
  }
  const size_t panels = K - 1;
  if (panels < 3) return trapezoid(times, w);
  double acc = 0.0;
  size_t k = 0;
  if (panels % 2 == 1) {
    acc += 3.0 * h0 / 8.0 * (w[0] + 3.0 * w[1] + 3.0 * w[2] + w[3]);
    k = 3;
  }
  for (; k + 2 < K; k += 2) {
    acc += h0 / 3.0 * (w[k] + 4.0 * w[k + 1] + w[k + 2]);
  }
  return acc;
}

// Sample indices of the split times (nearest match), as boundaries of
// half-open leg ranges: always starts with 0 and ends with K-1.
std::vector<size_t> split_bounds(const std::vector<double>& times,
                                 const std::vector<double>& splits) {
  std::vector<size_t> bounds = {0};
  for (double t : splits) {
    size_t best = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < times.size(); ++k) {
      const double g = std::abs(times[k] - t);
      if (g < gap) {
        gap = g;
        best = k;
      }
    }
    if (best > bounds.back() && best + 1 < times.size()) bounds.push_back(best);
  }
  bounds.push_back(times.size() - 1);
  return bounds;
}

template <typename F>
double sum_over_legs(const std::vector<double>& times, const std::vector<double>& splits,
                     F&& piece) {
  const std::vector<size_t> bounds = split_bounds(times, splits);
  double acc = 0.0;
  for (size_t b = 0; b + 1 < bounds.size(); ++b) {
    acc += piece(bounds[b], bounds[b + 1]);
  }
  return acc;
}

}  // namespace

double functional_J(const std::vector<double>& times,
                    const std::vector<GroupElement>& poses, double sigma,
                    const std::vector<Obstacle>& obstacles, const Connection& conn) {
  if (times.size() != poses.size()) {
    throw std::invalid_argument("times and poses disagree in length");
  }
  const size_t K = poses.size();
  const std::vector<Vec> v = path_velocities(times, poses);

  std::vector<double> w(K);
  for (size_t k = 0; k < K; ++k) {
    Vec dv;
    if (k == 0) {
      if (K >= 3) {
        const double s1 = times[1] - times[0];
        const double s2 = times[2] - times[0];
        dv = (s2 * s2 * (v[1] - v[0]) - s1 * s1 * (v[2] - v[0])) /
             (s1 * s2 * (s2 - s1));
      } else {
        dv = (v[1] - v[0]) / (times[1] - times[0]);
      }
    } else if (k + 1 == K) {
      if (K >= 3) {
        const double s1 = times[K - 1] - times[K - 2];
        const double s2 = times[K - 1] - times[K - 3];
        dv = (s2 * s2 * (v[K - 1] - v[K - 2]) - s1 * s1 * (v[K - 1] - v[K - 3])) /
             (s1 * s2 * (s2 - s1));
      } else {
        dv = (v[K - 1] - v[K - 2]) / (times[K - 1] - times[K - 2]);
      }
    } else {
      dv = (v[k + 1] - v[k - 1]) / (times[k + 1] - times[k - 1]);
    }
    const Vec d2 = dv + nabla(conn, v[k], v[k]);
    double val = inner(d2, d2, conn.metric) + sigma * inner(v[k], v[k], conn.metric);
    for (size_t j = 0; j < obstacles.size(); ++j) {
      val += potential_value(obstacles[j], poses[k], static_cast<int>(j));
    }
    w[k] = 0.5 * val;
  }
  return quad(times, w);
}

double functional_J(const Trajectory& traj, double sigma,
                    const std::vector<Obstacle>& obstacles, const Connection& conn) {
  std::vector<GroupElement> poses;
  poses.reserve(traj.states.size());
  for (const ExtremalState& s : traj.states) poses.push_back(s.x);
  return functional_J(traj.times, poses, sigma, obstacles, conn);
}

double constraint_term(const std::vector<double>& times,
                       const std::vector<GroupElement>& poses,
                       const std::vector<double>& lambda_series, int coordinate,
                       const Connection& conn) {
  (void)conn;
  if (lambda_series.size() != poses.size()) {
    throw std::invalid_argument("multiplier series and poses disagree in length");
  }
  const std::vector<Vec> v = path_velocities(times, poses);
  std::vector<double> w(poses.size());
  for (size_t k = 0; k < poses.size(); ++k) {
    w[k] = lambda_series[k] * v[k][coordinate];
  }
  return quad(times, w);
}

double functional_J(const std::vector<double>& times,
                    const std::vector<GroupElement>& poses, double sigma,
                    const std::vector<Obstacle>& obstacles, const Connection& conn,
                    const std::vector<double>& splits) {
  if (times.size() != poses.size()) {
    throw std::invalid_argument("times and poses disagree in length");
  }
  return sum_over_legs(times, splits, [&](size_t lo, size_t hi) {
    const std::vector<double> t(times.begin() + static_cast<long>(lo),
                                times.begin() + static_cast<long>(hi) + 1);
    const std::vector<GroupElement> x(poses.begin() + static_cast<long>(lo),
                                      poses.begin() + static_cast<long>(hi) + 1);
    return functional_J(t, x, sigma, obstacles, conn);
  });
}

double constraint_term(const std::vector<double>& times,
                       const std::vector<GroupElement>& poses,
                       const std::vector<double>& lambda_series, int coordinate,
                       const Connection& conn, const std::vector<double>& splits) {
  if (lambda_series.size() != poses.size()) {
    throw std::invalid_argument("multiplier series and poses disagree in length");
  }
  return sum_over_legs(times, splits, [&](size_t lo, size_t hi) {
    const std::vector<double> t(times.begin() + static_cast<long>(lo),
                                times.begin() + static_cast<long>(hi) + 1);
    const std::vector<GroupElement> x(poses.begin() + static_cast<long>(lo),
                                      poses.begin() + static_cast<long>(hi) + 1);
    const std::vector<double> l(lambda_series.begin() + static_cast<long>(lo),
                                lambda_series.begin() + static_cast<long>(hi) + 1);
    return constraint_term(t, x, l, coordinate, conn);
  });
}

Vec PerturbationField::at(double t, const std::vector<Knot>& knots) const {
  // Locate the segment; times at or beyond the last knot belong to the last.
  size_t seg = 0;
  while (seg + 2 < knots.size() && t >= knots[seg + 1].t) ++seg;
  const double a = knots[seg].t, b = knots[seg + 1].t;
  const double L = b - a;
  const double u = (t - a) * (b - t);
  // Quartic bump, amplitude 1 at midpoint; u <= 0 (sample at/outside the
  // segment ends) contributes nothing.
  const double phi = u <= 0.0 ? 0.0 : std::pow(u / (L * L / 4.0), 2);
  return phi * seg_directions[seg];
}

namespace {

double extended_action(const std::vector<double>& times,
                       const std::vector<GroupElement>& poses, const ProblemSpec& p,
                       const std::vector<double>* lambda_series, const Connection& conn,
                       const std::vector<double>& knot_times) {
  double J = functional_J(times, poses, p.sigma, p.obstacles, conn, knot_times);
  if (lambda_series != nullptr && p.constrained()) {
    J += constraint_term(times, poses, *lambda_series, p.constraints->zero_indices[0],
                         conn, knot_times);
  }
  return J;
}

/// One sampling of the path the sweep differentiates over. The multiplier
/// pointer is null for unconstrained problems.
struct SweepGrid {
  const std::vector<double>* times;
  const std::vector<GroupElement>* poses;
  const std::vector<double>* lambda;
};

/// Signed symmetric difference of the extended action along one bump field.
double directional_difference(const SweepGrid& g, const ProblemSpec& p,
                              const Connection& conn,
                              const std::vector<double>& knot_times,
                              const PerturbationField& field, double eps) {
  const size_t K = g.times->size();
  std::vector<GroupElement> plus(K), minus(K);
  for (size_t k = 0; k < K; ++k) {
    const Vec X = field.at((*g.times)[k], p.knots);
    plus[k] = compose((*g.poses)[k], exp(p.group, Vec(eps * X)));
    minus[k] = compose((*g.poses)[k], exp(p.group, Vec(-eps * X)));
  }
  const double Jp = extended_action(*g.times, plus, p, g.lambda, conn, knot_times);
  const double Jm = extended_action(*g.times, minus, p, g.lambda, conn, knot_times);
  // NaN would vanish inside std::max and masquerade as stationarity.
  if (!std::isfinite(Jp) || !std::isfinite(Jm)) {
    throw std::runtime_error("action is not finite along the swept path");
  }
  return (Jp - Jm) / (2.0 * eps);
}

/// Sweep of random bump directions. `fine` is sampled at step h; when a
/// second grid at step 2h is supplied, the two signed differences are
/// Richardson-combined per direction, (4 D_h - D_2h) / 3, which cancels the
/// O(h^2) bias the finite-difference velocity stencils put into the discrete
/// action. That bias is even in eps for the path itself but its derivative
/// along the bump is not, and at h = 1e-3 it dominates the sweep by two
/// orders of magnitude on the shipped problems.
double sweep_directions(const SweepGrid& fine, const SweepGrid* coarse,
                        const ProblemSpec& p, const StationarityOptions& opts) {
  const int n = algebra_dim(p.group);
  const Connection conn = Connection::general(p.metric);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Evaluate the action leg by leg so the velocity stencils never straddle
  // a knot, where extremals legitimately jump in jerk.
  std::vector<double> knot_times;
  for (size_t i = 1; i + 1 < p.knots.size(); ++i) knot_times.push_back(p.knots[i].t);

  double max_deriv = 0.0;
  for (int d = 0; d < opts.n_dirs; ++d) {
    PerturbationField field;
    field.seg_directions.resize(static_cast<size_t>(p.segments()));
    for (Vec& xi : field.seg_directions) {
      xi = Vec::NullaryExpr(n, [&](Eigen::Index) { return gauss(rng); });
      xi.normalize();
    }

    double eps = opts.eps;
    bool done = false;
    for (int attempt = 0; attempt <= opts.max_rescales && !done; ++attempt) {
      try {
        const double Dh = directional_difference(fine, p, conn, knot_times, field, eps);
        double deriv = Dh;
        if (coarse != nullptr) {
          const double D2h =
              directional_difference(*coarse, p, conn, knot_times, field, eps);
          deriv = (4.0 * Dh - D2h) / 3.0;
        }
        max_deriv = std::max(max_deriv, std::abs(deriv));
        done = true;
      } catch (const InsideObstacleError&) {
        eps *= 0.25;  // perturbed path clipped an obstacle; try gentler
      }
    }
    if (!done) {
      throw std::runtime_error(
          "perturbation direction kept entering an obstacle after max rescales");
    }
  }
  return max_deriv;
}

}  // namespace

namespace {

/// Pose and multiplier series of a reintegrated trajectory, in the layout
/// the sweep consumes.
struct SampledPath {
  std::vector<double> times;
  std::vector<GroupElement> poses;
  std::vector<double> lambda;

  SampledPath(const Trajectory& traj, bool constrained) : times(traj.times) {
    poses.reserve(traj.states.size());
    for (const ExtremalState& s : traj.states) poses.push_back(s.x);
    if (constrained) {
      lambda.resize(traj.states.size());
      for (size_t k = 0; k < traj.states.size(); ++k) lambda[k] = traj.states[k].lambda[0];
    }
  }

  SweepGrid grid(bool constrained) const {
    return {&times, &poses, constrained ? &lambda : nullptr};
  }
};

}  // namespace

double stationarity_test(const Solution& sol, const ProblemSpec& p_in,
                         const StationarityOptions& opts) {
  ProblemSpec p = p_in;
  p.validate_and_project();
  // Two samplings of the same solution, h and h/2; the sweep extrapolates
  // the discrete action's stencil bias out of each directional difference.
  const SampledPath at_h(reintegrate(sol, p, opts.h_fine, opts.scheme),
                         p.constrained());
  const SampledPath at_half(reintegrate(sol, p, 0.5 * opts.h_fine, opts.scheme),
                            p.constrained());
  const SweepGrid coarse = at_h.grid(p.constrained());
  const SweepGrid fine = at_half.grid(p.constrained());
  return sweep_directions(fine, &coarse, p, opts);
}

double stationarity_test(const Solution& sol, const ProblemSpec& p, int n_dirs,
                         double eps) {
  StationarityOptions opts;
  opts.n_dirs = n_dirs;
  opts.eps = eps;
  return stationarity_test(sol, p, opts);
}

double stationarity_of_path(const std::vector<double>& times,
                            const std::vector<GroupElement>& poses,
                            const ProblemSpec& p_in, const StationarityOptions& opts) {
  ProblemSpec p = p_in;
  p.validate_and_project();
  const SweepGrid fine{&times, &poses, nullptr};

  // Stride every second sample within each leg to get the 2h companion grid
  // for the extrapolation. A leg that is non-uniform or has an odd panel
  // count has no such companion; sweep the given grid alone in that case.
  std::vector<double> knot_times;
  for (size_t i = 1; i + 1 < p.knots.size(); ++i) knot_times.push_back(p.knots[i].t);
  const std::vector<size_t> bounds = split_bounds(times, knot_times);
  bool can_stride = times.size() >= 3;
  for (size_t b = 0; b + 1 < bounds.size() && can_stride; ++b) {
    const size_t lo = bounds[b], hi = bounds[b + 1];
    if ((hi - lo) % 2 != 0 || hi - lo < 2) {
      can_stride = false;
      break;
    }
    const double h0 = times[lo + 1] - times[lo];
    for (size_t k = lo; k + 1 <= hi; ++k) {
      if (std::abs((times[k + 1] - times[k]) - h0) > 1e-9 * std::max(1.0, std::abs(h0))) {
        can_stride = false;
        break;
      }
    }
  }
  if (!can_stride) {
    return sweep_directions(fine, nullptr, p, opts);
  }

  std::vector<double> ct;
  std::vector<GroupElement> cp;
  for (size_t b = 0; b + 1 < bounds.size(); ++b) {
    for (size_t k = bounds[b]; k < bounds[b + 1]; k += 2) {
      ct.push_back(times[k]);
      cp.push_back(poses[k]);
    }
  }
  ct.push_back(times.back());
  cp.push_back(poses.back());
  const SweepGrid coarse{&ct, &cp, nullptr};
  return sweep_directions(fine, &coarse, p, opts);
}

}  // namespace geospline
