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

#include "geospline/config.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "geospline/lie_groups.hpp"
#include "geospline/potentials.hpp"

namespace geospline {

namespace {

using json = nlohmann::json;

Group parse_group(const std::string& tag) {
  if (tag == "SO3") return Group::SO3;
  if (tag == "SE2") return Group::SE2;
  if (tag == "SE3") return Group::SE3;
  throw ValidationError("unknown group tag \"" + tag + "\" (expected SO3, SE2 or SE3)");
}

const char* group_tag(Group g) {
  switch (g) {
    case Group::SO3: return "SO3";
    case Group::SE2: return "SE2";
    default: return "SE3";
  }
}

Vec parse_vector(const json& j, const std::string& what, int expected) {
  if (!j.is_array()) throw ValidationError(what + " must be an array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError(what + " must hold numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  if (expected >= 0 && v.size() != expected) {
    throw ValidationError(what + " must have " + std::to_string(expected) +
                          " entries, got " + std::to_string(v.size()));
  }
  return v;
}

/// Row-major list -> square matrix, snapped to the nearest rotation when the
/// drift is small enough to be read as serialization noise.
Mat parse_rotation(const json& j, const std::string& what, int n) {
  const Vec flat = parse_vector(j, what, n * n);
  Mat R(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) R(i, k) = flat[i * n + k];

  const double drift = (R.transpose() * R - Mat::Identity(n, n)).norm();
  if (drift > 1e-6) {
    throw ValidationError(what + " is not orthogonal (drift " + std::to_string(drift) + ")");
  }
  if (R.determinant() <= 0.0) {
    throw ValidationError(what + " has non-positive determinant (not a rotation)");
  }
  // Snap only genuinely drifted inputs. Below the floor the matrix is
  // orthogonal to machine precision already, and re-projecting it would
  // wiggle low bits on every parse, breaking bit-exact round trips.
  if (drift > 1e-12) {
    Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    R = svd.matrixU() * svd.matrixV().transpose();
  }
  return R;
}

Vec metric_axis(const json& j, const std::string& what, int dim) {
  if (j.is_number()) return Vec::Constant(dim, j.get<double>());
  return parse_vector(j, what, dim);
}

MetricTensor parse_metric(const json& j, Group g) {
  MetricTensor metric = MetricTensor::identity(g);
  if (j.is_null()) return metric;
  if (!j.is_object()) throw ValidationError("metric must be an object");
  const int rot = rot_dim(g);
  const int trans = trans_dim(g);
  if (j.contains("J")) {
    metric.diag.head(rot) = metric_axis(j.at("J"), "metric.J", rot);
  }
  if (j.contains("m")) {
    if (trans == 0) throw ValidationError("metric.m does not apply to SO3");
    metric.diag.tail(trans) = metric_axis(j.at("m"), "metric.m", trans);
  }
  metric.validate();
  return metric;
}

Obstacle parse_obstacle(const json& j, Group g, size_t index) {
  const std::string where = "obstacles[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  const std::string kind = j.at("kind").get<std::string>();
  const double tau = j.at("tau").get<double>();
  Obstacle obs;
  if (kind == "sphere") {
    obs = Obstacle::sphere(parse_vector(j.at("center"), where + ".center", trans_dim(g)),
                           j.at("offset").get<double>(), tau);
  } else if (kind == "orientation" || kind == "compact_point") {
    GroupElement Q = GroupElement::identity(Group::SO3);
    Q.R = parse_rotation(j.at("Q"), where + ".Q", 3);
    obs = (kind == "orientation") ? Obstacle::orientation(Q, tau) : Obstacle::compact_point(Q, tau);
  } else {
    throw ValidationError(where + ".kind \"" + kind +
                          "\" unknown (sphere, orientation or compact_point)");
  }
  obs.validate(g);
  return obs;
}

Knot parse_knot(const json& j, Group g, size_t index) {
  const std::string where = "knots[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  Knot k;
  k.t = j.at("t").get<double>();
  const int n = (g == Group::SE2) ? 2 : 3;
  Mat R = parse_rotation(j.at("R"), where + ".R", n);
  Vec r;
  if (g != Group::SO3) {
    r = parse_vector(j.at("r"), where + ".r", trans_dim(g));
  }
  k.pose = GroupElement::from_parts(g, R, r);
  return k;
}

SolverOptions parse_solver(const json& j) {
  SolverOptions opt;
  if (j.is_null()) return opt;
  if (!j.is_object()) throw ValidationError("solver must be an object");
  if (j.contains("h")) opt.h = j.at("h").get<double>();
  if (j.contains("tol")) opt.residual_tol = j.at("tol").get<double>();
  if (j.contains("max_iters")) opt.max_newton_iters = j.at("max_iters").get<int>();
  if (j.contains("fd_epsilon")) opt.fd_epsilon = j.at("fd_epsilon").get<double>();
  if (j.contains("scheme")) {
    const std::string s = j.at("scheme").get<std::string>();
    if (s == "euler") {
      opt.scheme = Scheme::SemiImplicitEuler;
    } else if (s == "rk4") {
      opt.scheme = Scheme::RK4;
    } else {
      throw ValidationError("solver.scheme \"" + s + "\" unknown (euler or rk4)");
    }
  }
  return opt;
}

json dump_vector(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json dump_rotation(const Mat& R) {
  json out = json::array();
  for (Eigen::Index i = 0; i < R.rows(); ++i)
    for (Eigen::Index k = 0; k < R.cols(); ++k) out.push_back(R(i, k));
  return out;
}

/// %.17g: enough digits to reproduce the double exactly, no fixed padding.
void append_num(std::string& row, double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  row += buf;
}

}  // namespace

ProblemSpec parse_problem(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
  }

  try {
    if (!doc.is_object()) throw ValidationError("config root must be an object");

    ProblemSpec p;
    p.group = parse_group(doc.at("group").get<std::string>());
    const int n = algebra_dim(p.group);

    p.metric = parse_metric(doc.value("metric", json()), p.group);
    p.sigma = doc.value("sigma", 0.0);
    if (p.sigma < 0.0) throw ValidationError("sigma must be non-negative");

    if (doc.contains("obstacles")) {
      const json& arr = doc.at("obstacles");
      if (!arr.is_array()) throw ValidationError("obstacles must be an array");
      for (size_t i = 0; i < arr.size(); ++i) {
        p.obstacles.push_back(parse_obstacle(arr[i], p.group, i));
      }
    }

    const json& knots = doc.at("knots");
    if (!knots.is_array() || knots.size() < 2) {
      throw ValidationError("knots must be an array with at least two entries");
    }
    for (size_t i = 0; i < knots.size(); ++i) {
      p.knots.push_back(parse_knot(knots[i], p.group, i));
    }

    p.v0 = parse_vector(doc.at("v0"), "v0", n);
    p.vN = parse_vector(doc.at("vN"), "vN", n);

    if (doc.contains("constraints") && !doc.at("constraints").is_null()) {
      const json& c = doc.at("constraints");
      const Vec idx = parse_vector(c.at("zero_indices"), "constraints.zero_indices", -1);
      if (p.group != Group::SE2 || idx.size() != 1 || idx[0] != 2.0) {
        throw ValidationError(
            "only the SE2 knife-edge constraint (zero_indices [2]) is supported");
      }
      p.constraints =
          ConstraintSpec::unicycle_knife_edge(p.metric.diag[0], p.metric.diag[1]);
    }

    p.solver = parse_solver(doc.value("solver", json()));
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config schema error: ") + e.what());
  }
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string serialize_problem(const ProblemSpec& p) {
  json doc;
  doc["group"] = group_tag(p.group);

  const int rot = rot_dim(p.group);
  json metric;
  metric["J"] = dump_vector(p.metric.diag.head(rot));
  if (p.group != Group::SO3) {
    metric["m"] = dump_vector(p.metric.diag.tail(trans_dim(p.group)));
  }
  doc["metric"] = metric;
  doc["sigma"] = p.sigma;

  json obstacles = json::array();
  for (const Obstacle& o : p.obstacles) {
    json jo;
    jo["tau"] = o.tau;
    switch (o.kind) {
      case Obstacle::Kind::EuclideanSphere:
        jo["kind"] = "sphere";
        jo["center"] = dump_vector(o.center);
        jo["offset"] = o.offset;
        break;
      case Obstacle::Kind::OrientationPoint:
        jo["kind"] = "orientation";
        jo["Q"] = dump_rotation(o.pose.R);
        break;
      case Obstacle::Kind::CompactGroupPoint:
        jo["kind"] = "compact_point";
        jo["Q"] = dump_rotation(o.pose.R);
        break;
    }
    obstacles.push_back(jo);
  }
  doc["obstacles"] = obstacles;

  json knots = json::array();
  for (const Knot& k : p.knots) {
    json jk;
    jk["t"] = k.t;
    jk["R"] = dump_rotation(k.pose.R);
    if (p.group != Group::SO3) jk["r"] = dump_vector(k.pose.r);
    knots.push_back(jk);
  }
  doc["knots"] = knots;

  doc["v0"] = dump_vector(p.v0);
  doc["vN"] = dump_vector(p.vN);

  if (p.constrained()) {
    json c;
    json idx = json::array();
    for (int i : p.constraints->zero_indices) idx.push_back(i);
    c["zero_indices"] = idx;
    doc["constraints"] = c;
  }

  json solver;
  solver["h"] = p.solver.h;
  solver["tol"] = p.solver.residual_tol;
  solver["max_iters"] = p.solver.max_newton_iters;
  solver["fd_epsilon"] = p.solver.fd_epsilon;
  solver["scheme"] = p.solver.scheme == Scheme::RK4 ? "rk4" : "euler";
  doc["solver"] = solver;

  return doc.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& os, const ProblemSpec& p, const Trajectory& tr) {
  const int n = algebra_dim(p.group);
  const bool with_lambda = p.constrained();

  std::string row = "t";
  auto col = [&row](const std::string& name) { row += ", " + name; };
  switch (p.group) {
    case Group::SO3:
    case Group::SE3:
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) col("R" + std::to_string(i) + std::to_string(k));
      if (p.group == Group::SE3) {
        col("rx");
        col("ry");
        col("rz");
      }
      break;
    case Group::SE2:
      col("R00");
      col("R01");
      col("R10");
      col("R11");
      col("rx");
      col("ry");
      col("theta");
      break;
  }
  for (int i = 0; i < n; ++i) col("v_" + std::to_string(i));
  for (int i = 0; i < n; ++i) col("v1_" + std::to_string(i));
  for (int i = 0; i < n; ++i) col("v2_" + std::to_string(i));
  col("V_total");
  col("min_clearance");
  if (with_lambda) col("lambda");
  os << row << "\n";

  for (size_t s = 0; s < tr.size(); ++s) {
    const ExtremalState& st = tr.states[s];
    row.clear();
    append_num(row, tr.times[s]);
    auto push = [&row](double x) {
      row += ", ";
      append_num(row, x);
    };

    for (Eigen::Index i = 0; i < st.x.R.rows(); ++i)
      for (Eigen::Index k = 0; k < st.x.R.cols(); ++k) push(st.x.R(i, k));
    for (Eigen::Index i = 0; i < st.x.r.size(); ++i) push(st.x.r[i]);
    if (p.group == Group::SE2) {
      double theta = std::atan2(st.x.R(1, 0), st.x.R(0, 0));
      if (theta < 0.0) theta += 2.0 * M_PI;
      push(theta);
    }

    for (int i = 0; i < n; ++i) push(st.v[i]);
    for (int i = 0; i < n; ++i) push(st.v1[i]);
    for (int i = 0; i < n; ++i) push(st.v2[i]);

    double v_total = 0.0;
    double min_clear = std::numeric_limits<double>::quiet_NaN();
    for (size_t o = 0; o < p.obstacles.size(); ++o) {
      v_total += potential_value(p.obstacles[o], st.x, static_cast<int>(o));
      const double f = obstacle_clearance(p.obstacles[o], st.x);
      if (std::isnan(min_clear) || f < min_clear) min_clear = f;
    }
    push(v_total);
    push(min_clear);
    if (with_lambda) push(st.lambda.size() ? st.lambda[0] : 0.0);
    os << row << "\n";
  }
}

void write_diagnostics_json(std::ostream& os, const ProblemSpec& p, const Solution& sol,
                            const RunReport& report) {
  json doc;
  doc["status"] = sol.converged() ? "converged" : "no_convergence";
  doc["residual_norm"] = sol.residual_norm;
  doc["newton_iters"] = sol.newton_iters;
  doc["penalized_evals"] = sol.penalized_evals;
  doc["scheme"] = scheme_name(sol.trajectory.scheme);
  doc["h"] = sol.trajectory.step_size;
  doc["samples"] = sol.trajectory.size();

  json jumps = json::array();
  for (double x : sol.knot_jerk_jumps) jumps.push_back(x);
  doc["knot_jerk_jumps"] = jumps;

  json clearances = json::array();
  for (double x : sol.clearance_min) clearances.push_back(x);
  doc["clearance_min"] = clearances;

  if (p.constrained() && !sol.trajectory.states.empty()) {
    double max_b2 = 0.0;
    for (const ExtremalState& st : sol.trajectory.states) {
      for (int idx : p.constraints->zero_indices) {
        max_b2 = std::max(max_b2, std::abs(st.v[idx]));
      }
    }
    doc["max_abs_constrained_velocity"] = max_b2;
    if (sol.max_abnormal_residual) {
      doc["max_abnormal_residual"] = *sol.max_abnormal_residual;
    }
  }

  if (report.functional_j) doc["functional_J"] = *report.functional_j;
  if (report.stationarity) doc["stationarity_max_derivative"] = *report.stationarity;
  doc["solve_seconds"] = report.solve_seconds;

  json warnings = json::array();
  for (const std::string& w : sol.warnings) warnings.push_back(w);
  doc["warnings"] = warnings;

  os << doc.dump(2) << "\n";
}

}  // namespace geospline
