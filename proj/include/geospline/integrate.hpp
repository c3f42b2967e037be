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

#include <functional>
#include <vector>

#include "geospline/dynamics.hpp"
#include "geospline/types.hpp"

namespace geospline {

enum class Scheme { SemiImplicitEuler, RK4 };

const char* scheme_name(Scheme s);

/// Right-hand side callback: maps the current state to v''' and (for
/// constrained problems) the multiplier rates.
using RhsFn = std::function<StateDerivs(const ExtremalState&)>;

/// One integration step of size h. SemiImplicitEuler cascades the updates
/// (v'' first, each lower derivative then sees the updated one) and
/// reconstructs the pose as x exp(h v+). RK4 runs the classical stages on
/// the (v, v', v'', lambda) chain with the pose frozen and reconstructs the
/// pose from the stage-averaged velocity.
ExtremalState step(const ExtremalState& s, double h, const RhsFn& rhs, Scheme scheme);

/// An integrated segment or a whole stitched trajectory.
struct Trajectory {
  std::vector<double> times;
  std::vector<ExtremalState> states;
  Scheme scheme = Scheme::SemiImplicitEuler;
  double step_size = 0.0;
  /// Minimum barrier margin seen per monitored obstacle (empty if none).
  std::vector<double> clearance_min;

  std::size_t size() const { return times.size(); }
};

/// Integrate from t0 to t1 with fixed step h (a shorter final step absorbs
/// any remainder). Samples every step, monitors the margin of each obstacle
/// in `monitor`, and throws InsideObstacleError (tagged with the failure
/// time) as soon as a sample penetrates one.
Trajectory integrate_segment(const ExtremalState& s0, double t0, double t1, double h,
                             const RhsFn& rhs, Scheme scheme,
                             const std::vector<Obstacle>& monitor = {});

}  // namespace geospline
