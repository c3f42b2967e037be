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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "geospline/config.hpp"
#include "geospline/geometry.hpp"
#include "geospline/variational.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNoConvergence = 2;

int run_solve(const std::string& config_path, const std::string& out_dir,
              bool check_stationarity, const std::string& scheme_override,
              double h_override) {
  namespace fs = std::filesystem;
  using clock = std::chrono::steady_clock;

  geospline::ProblemSpec problem;
  try {
    problem = geospline::load_problem(config_path);
    if (!scheme_override.empty()) {
      problem.solver.scheme = scheme_override == "rk4"
                                  ? geospline::Scheme::RK4
                                  : geospline::Scheme::SemiImplicitEuler;
    }
    if (h_override > 0.0) problem.solver.h = h_override;
  } catch (const geospline::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / "trajectory.csv";
  const fs::path diag_path = fs::path(out_dir) / "diagnostics.json";

  geospline::Solution sol;
  geospline::RunReport report;
  const auto t_start = clock::now();
  try {
    sol = geospline::solve(problem);
  } catch (const geospline::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    // Best iterate penetrates an obstacle or hits a log branch cut: no
    // usable trajectory, but still leave a machine-readable trace.
    std::cerr << "error: " << e.what() << "\n";
    std::ofstream diag(diag_path);
    diag << "{\n  \"status\": \"no_convergence\",\n  \"error\": \""
         << e.what() << "\"\n}\n";
    return kExitNoConvergence;
  }
  report.solve_seconds =
      std::chrono::duration<double>(clock::now() - t_start).count();

  // The diagnostics functional uses the solver-independent action evaluator;
  // a validated copy supplies the projected boundary data and metric.
  geospline::ProblemSpec validated = problem;
  validated.validate_and_project();
  try {
    report.functional_j = geospline::functional_J(
        sol.trajectory, validated.sigma, validated.obstacles,
        geospline::Connection::general(validated.metric));
  } catch (const std::exception& e) {
    sol.warnings.push_back(std::string("functional evaluation failed: ") + e.what());
  }

  if (check_stationarity && sol.converged()) {
    report.stationarity = geospline::stationarity_test(sol, problem, 50, 1e-4);
  }

  {
    std::ofstream csv(csv_path);
    geospline::write_trajectory_csv(csv, validated, sol.trajectory);
    std::ofstream diag(diag_path);
    geospline::write_diagnostics_json(diag, validated, sol, report);
  }

  std::cout << (sol.converged() ? "converged" : "no convergence") << ": residual "
            << sol.residual_norm << " after " << sol.newton_iters << " iterations, "
            << sol.trajectory.size() << " samples, " << report.solve_seconds
            << " s\n";
  for (const std::string& w : sol.warnings) std::cout << "warning: " << w << "\n";
  if (report.functional_j) std::cout << "action J = " << *report.functional_j << "\n";
  if (report.stationarity) {
    std::cout << "stationarity: max directional derivative " << *report.stationarity
              << "\n";
  }
  std::cout << "wrote " << csv_path.string() << " and " << diag_path.string() << "\n";

  return sol.converged() ? kExitOk : kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Obstacle-avoiding interpolating trajectories on SO(3), SE(2), SE(3)"};
  // --h is the step-size override, so help keeps only its long spelling.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string scheme;
  double h = 0.0;
  bool check_stationarity = false;

  CLI::App* solve = app.add_subcommand("solve", "Solve an interpolation problem file");
  solve->set_help_flag("--help", "Print this help message and exit");
  solve->add_option("config", config_path, "Problem JSON file")->required();
  solve->add_option("--out", out_dir, "Output directory (default: current)");
  solve->add_flag("--check-stationarity", check_stationarity,
                  "Run the first-variation check on the solution");
  solve->add_option("--scheme", scheme, "Integrator override")
      ->check(CLI::IsMember({"euler", "rk4"}));
  solve->add_option("--h", h, "Step size override")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  return run_solve(config_path, out_dir, check_stationarity, scheme, h);
}
