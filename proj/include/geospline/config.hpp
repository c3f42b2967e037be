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

#include <iosfwd>
#include <optional>
#include <string>

#include "geospline/shooting.hpp"

namespace geospline {

/// Parse a problem description from JSON text.
///
/// Schema (rotations are row-major; angles are never stored):
///   {
///     "group": "SO3" | "SE2" | "SE3",
///     "metric": {"J": 1.0, "m": 1.0},            // scalars, or arrays per axis
///     "sigma": 0.5,
///     "obstacles": [
///       {"kind": "sphere", "center": [...], "offset": 1.0, "tau": 1.7},
///       {"kind": "orientation" | "compact_point", "Q": [...], "tau": 1.0}
///     ],
///     "knots": [{"t": 0.0, "R": [...], "r": [...]}, ...],
///     "v0": [...], "vN": [...],
///     "constraints": {"zero_indices": [2]},      // optional, SE(2) knife edge
///     "solver": {"h": 0.01, "tol": 1e-8, "max_iters": 100,
///                "fd_epsilon": 1e-6, "scheme": "euler" | "rk4"}
///   }
///
/// Rotation blocks with orthogonality drift up to 1e-6 are snapped back with
/// a polar decomposition; anything worse is rejected. Throws ValidationError
/// for malformed JSON (with the parser's byte offset) and for schema or
/// geometry violations. The returned problem is as written in the file; the
/// solver applies its own validation and boundary-velocity projection.
ProblemSpec parse_problem(const std::string& json_text);

/// Read and parse a problem file.
ProblemSpec load_problem(const std::string& path);

/// Serialize a problem back to JSON text. Numeric fields survive a
/// parse/serialize/parse round trip bit-exactly.
std::string serialize_problem(const ProblemSpec& p);

/// Numbers that accompany a Solution in the diagnostics file.
struct RunReport {
  std::optional<double> functional_j;  // action of the solved path
  std::optional<double> stationarity;  // max directional derivative, if checked
  double solve_seconds = 0.0;
};

/// Trajectory CSV, one row per sample, %.17g throughout. Columns: t, pose
/// coordinates (row-major R, then r; SE(2) appends theta wrapped to
/// [0, 2pi)), v, v', v'', total potential, minimum obstacle margin, and
/// lambda for constrained problems.
void write_trajectory_csv(std::ostream& os, const ProblemSpec& p,
                          const Trajectory& tr);

/// Diagnostics JSON: solver status, residuals, jerk jumps, clearance minima,
/// constraint quality for constrained runs, warnings, and the run report.
void write_diagnostics_json(std::ostream& os, const ProblemSpec& p,
                            const Solution& sol, const RunReport& report);

}  // namespace geospline
